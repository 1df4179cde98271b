#include "qkr/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace qkr {

namespace {
constexpr double kEmptyLineNorm = 1e-30;
}

double SchmidtSpectrum::sum() const {
    return std::accumulate(eigenvalues.begin(), eigenvalues.end(), 0.0);
}

SchmidtSpectrum schmidt_spectrum(const StateVector& state, long kick_index) {
    const auto m = bipartition_matrix(state);
    const Eigen::Index rows = m.rows();
    const Eigen::Index cols = m.cols();

    const Eigen::VectorXd row_norms = m.rowwise().squaredNorm();
    const Eigen::VectorXd col_norms = m.colwise().squaredNorm().transpose();
    std::vector<Eigen::Index> keep_rows, keep_cols;
    for (Eigen::Index i = 0; i < rows; ++i)
        if (row_norms[i] > kEmptyLineNorm) keep_rows.push_back(i);
    for (Eigen::Index j = 0; j < cols; ++j)
        if (col_norms[j] > kEmptyLineNorm) keep_cols.push_back(j);

    SchmidtSpectrum out;
    out.kick_index = kick_index;
    out.eigenvalues.assign(static_cast<std::size_t>(std::min(rows, cols)), 0.0);
    if (keep_rows.empty() || keep_cols.empty()) return out;

    Eigen::MatrixXcd sub(static_cast<Eigen::Index>(keep_rows.size()),
                         static_cast<Eigen::Index>(keep_cols.size()));
    for (Eigen::Index j = 0; j < sub.cols(); ++j)
        for (Eigen::Index i = 0; i < sub.rows(); ++i) sub(i, j) = m(keep_rows[i], keep_cols[j]);

    // Singular values only (divide and conquer, no vectors).
    std::vector<double> sv(static_cast<std::size_t>(std::min(sub.rows(), sub.cols())));
    const lapack_int info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'N', static_cast<lapack_int>(sub.rows()),
                                           static_cast<lapack_int>(sub.cols()), sub.data(),
                                           static_cast<lapack_int>(sub.rows()), sv.data(), nullptr, 1, nullptr, 1);
    if (info != 0) throw std::runtime_error("schmidt_spectrum: zgesdd failed (info " + std::to_string(info) + ")");
    for (std::size_t i = 0; i < sv.size(); ++i) out.eigenvalues[i] = sv[i] * sv[i];
    std::sort(out.eigenvalues.begin(), out.eigenvalues.end(), std::greater<>());
    return out;
}

double von_neumann(const SchmidtSpectrum& spectrum) {
    double s = 0;
    for (double lam : spectrum.eigenvalues)
        if (lam > kEigenvalueFloor) s -= lam * std::log(lam);
    return std::max(0.0, s);
}

double purity(const SchmidtSpectrum& spectrum) {
    double p = 0;
    for (double lam : spectrum.eigenvalues)
        if (lam > kEigenvalueFloor) p += lam * lam;
    return p;
}

double linear_entropy(const SchmidtSpectrum& spectrum) { return 1.0 - purity(spectrum); }

double one_minus_lambda1(const SchmidtSpectrum& spectrum) {
    const double top = spectrum.eigenvalues.empty() ? 0.0 : spectrum.eigenvalues.front();
    return std::clamp(1.0 - top, 0.0, 1.0);
}

namespace {

template <class F>
std::vector<double> column(const EntanglementTrace& trace, F get) {
    std::vector<double> out;
    out.reserve(trace.records.size());
    for (const auto& r : trace.records) out.push_back(get(r));
    return out;
}

void put(std::ostream& os, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << buf;
}

}  // namespace

std::vector<double> EntanglementTrace::times() const {
    return column(*this, [](const auto& r) { return static_cast<double>(r.t); });
}
std::vector<double> EntanglementTrace::von_neumann_series() const {
    return column(*this, [](const auto& r) { return r.s_vn; });
}
std::vector<double> EntanglementTrace::linear_entropy_series() const {
    return column(*this, [](const auto& r) { return r.s_lin; });
}
std::vector<double> EntanglementTrace::one_minus_lambda1_series() const {
    return column(*this, [](const auto& r) {
        return r.top_lambda.empty() ? 0.0 : std::clamp(1.0 - r.top_lambda.front(), 0.0, 1.0);
    });
}
std::vector<double> EntanglementTrace::energy_series() const {
    return column(*this, [](const auto& r) { return r.energy; });
}

void write_trace_csv(std::ostream& os, const EntanglementTrace& trace) {
    os << "t,S_vN,S_lin,purity";
    for (int k = 1; k <= trace.top_k; ++k) os << ",lambda_" << k;
    os << ",E\n";
    for (const auto& r : trace.records) {
        os << r.t << ',';
        put(os, r.s_vn);
        os << ',';
        put(os, r.s_lin);
        os << ',';
        put(os, r.purity);
        for (int k = 0; k < trace.top_k; ++k) {
            os << ',';
            put(os, k < static_cast<int>(r.top_lambda.size()) ? r.top_lambda[k] : 0.0);
        }
        os << ',';
        put(os, r.energy);
        os << '\n';
    }
}

EntanglementTrace read_trace_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("read_trace_csv: empty input");
    std::vector<std::string> header;
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) header.push_back(cell);
    }
    if (header.size() < 5 || header[0] != "t" || header[1] != "S_vN" || header[2] != "S_lin" ||
        header[3] != "purity" || header.back() != "E")
        throw std::runtime_error("read_trace_csv: unexpected header");

    EntanglementTrace trace;
    trace.top_k = static_cast<int>(header.size()) - 5;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> v;
        while (std::getline(ss, cell, ',')) v.push_back(std::stod(cell));
        if (v.size() != header.size()) throw std::runtime_error("read_trace_csv: ragged row");
        EntanglementRecord r;
        r.t = static_cast<long>(v[0]);
        r.s_vn = v[1];
        r.s_lin = v[2];
        r.purity = v[3];
        r.top_lambda.assign(v.begin() + 4, v.end() - 1);
        r.energy = v.back();
        trace.records.push_back(std::move(r));
    }
    return trace;
}

}  // namespace qkr
