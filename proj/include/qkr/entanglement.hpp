#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "qkr/hilbert.hpp"

namespace qkr {

/// Eigenvalues of the rotor-1 reduced density matrix, descending.
struct SchmidtSpectrum {
    std::vector<double> eigenvalues;
    long kick_index = 0;

    double sum() const;
};

/// Squared singular values of the rotor-1 | rest bipartition matrix.
/// Rows and columns carrying no weight (squared norm <= 1e-30) are dropped
/// before the SVD and reappear as zero eigenvalues.
SchmidtSpectrum schmidt_spectrum(const StateVector& state, long kick_index = 0);

/// Eigenvalues at or below this are treated as zero by the entropy functionals.
inline constexpr double kEigenvalueFloor = 1e-15;

double von_neumann(const SchmidtSpectrum& spectrum);
double purity(const SchmidtSpectrum& spectrum);
double linear_entropy(const SchmidtSpectrum& spectrum);
double one_minus_lambda1(const SchmidtSpectrum& spectrum);

struct EntanglementRecord {
    long t = 0;
    double s_vn = 0;
    double s_lin = 0;
    double purity = 1;
    std::vector<double> top_lambda;
    double energy = 0;
};

struct EntanglementTrace {
    int top_k = 0;
    std::vector<EntanglementRecord> records;
    std::optional<long> wrap_kick;  // first kick at which the edge guard tripped

    std::vector<double> times() const;
    std::vector<double> von_neumann_series() const;
    std::vector<double> linear_entropy_series() const;
    std::vector<double> one_minus_lambda1_series() const;
    std::vector<double> energy_series() const;
};

// CSV columns, in order: t, S_vN, S_lin, purity, lambda_1..lambda_k, E.
// Values are written with 17 significant digits.
void write_trace_csv(std::ostream& os, const EntanglementTrace& trace);
EntanglementTrace read_trace_csv(std::istream& is);

}  // namespace qkr
