#include "qkr/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include <Eigen/Dense>

#include "qkr/entanglement.hpp"
#include "qkr/evolution.hpp"

namespace qkr {

namespace {

using Vec = Eigen::VectorXcd;

void require_oracle_shape(const SystemConfig& config) {
    require_valid(config);
    if (config.rotor_count() != 2 || config.basis_size > kOracleMaxBasis)
        throw UsageError("dense_oracle: needs N = 2 and basis_size <= 16");
}

// Centred momentum value for oracle index c.
double centred_n(int c, int l) { return c - l / 2; }

// psi_x(j) = L^-1/2 sum_c psi_p(c) exp(+i n_c x_j), applied to both rotors.
Vec to_position(const Vec& p, int l) {
    const double inv = 1.0 / l;  // (L^-1/2)^2 for two axes
    Vec x = Vec::Zero(p.size());
    for (int j1 = 0; j1 < l; ++j1)
        for (int j2 = 0; j2 < l; ++j2) {
            cplx acc{0, 0};
            const double x1 = 2 * std::numbers::pi * j1 / l;
            const double x2 = 2 * std::numbers::pi * j2 / l;
            for (int c1 = 0; c1 < l; ++c1)
                for (int c2 = 0; c2 < l; ++c2)
                    acc += p[c1 * l + c2] * std::exp(cplx(0, centred_n(c1, l) * x1 + centred_n(c2, l) * x2));
            x[j1 * l + j2] = acc * inv;
        }
    return x;
}

Vec to_momentum(const Vec& x, int l) {
    const double inv = 1.0 / l;
    Vec p = Vec::Zero(x.size());
    for (int c1 = 0; c1 < l; ++c1)
        for (int c2 = 0; c2 < l; ++c2) {
            cplx acc{0, 0};
            for (int j1 = 0; j1 < l; ++j1)
                for (int j2 = 0; j2 < l; ++j2) {
                    const double x1 = 2 * std::numbers::pi * j1 / l;
                    const double x2 = 2 * std::numbers::pi * j2 / l;
                    acc += x[j1 * l + j2] * std::exp(cplx(0, -(centred_n(c1, l) * x1 + centred_n(c2, l) * x2)));
                }
            p[c1 * l + c2] = acc * inv;
        }
    return p;
}

double potential(const SystemConfig& cfg, double x1, double x2) {
    const auto& r = cfg.rotors;
    double v = r[0].kick_strength * std::cos(x1 + r[0].kick_phase) + r[1].kick_strength * std::cos(x2 + r[1].kick_phase);
    const double k = cfg.interaction.strength;
    switch (cfg.interaction.kind) {
        case InteractionKind::AllToAll: v += k * std::cos(x1 + x2); break;
        case InteractionKind::NearestNeighbor: v += k * std::cos(x1 - x2); break;
        case InteractionKind::None: break;
    }
    return v;
}

// Engine state (FFT order, any representation tag) -> oracle vector.
Vec to_oracle_order(const StateVector& psi) {
    const int l = psi.basis();
    Vec v(static_cast<Eigen::Index>(psi.size()));
    for (int c1 = 0; c1 < l; ++c1)
        for (int c2 = 0; c2 < l; ++c2) {
            const int s1 = momentum_slot(c1 - l / 2, l);
            const int s2 = momentum_slot(c2 - l / 2, l);
            v[c1 * l + c2] = psi[static_cast<std::size_t>(s1) * l + s2];
        }
    return v;
}

std::vector<double> oracle_spectrum(const Vec& v, int l) {
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(l, l);
    for (int a = 0; a < l; ++a)
        for (int b = 0; b < l; ++b)
            for (int c = 0; c < l; ++c) rho(a, b) += v[a * l + c] * std::conj(v[b * l + c]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
    std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + l);
    std::sort(ev.begin(), ev.end(), std::greater<>());
    return ev;
}

double entropy_of(const std::vector<double>& ev) {
    double s = 0;
    for (double x : ev)
        if (x > 1e-15) s -= x * std::log(x);
    return s;
}

double linear_entropy_of(const std::vector<double>& ev) {
    double p = 0;
    for (double x : ev)
        if (x > 1e-15) p += x * x;
    return 1 - p;
}

}  // namespace

Eigen::MatrixXcd dense_step_unitary(const SystemConfig& config) {
    require_oracle_shape(config);
    const int l = config.basis_size;
    const int dim = l * l;
    const double hbar = effective_planck(config.resonance);
    const double period = config.resonance.period;

    Eigen::MatrixXcd u(dim, dim);
    for (int col = 0; col < dim; ++col) {
        Vec e = Vec::Zero(dim);
        e[col] = 1.0;
        Vec x = to_position(e, l);
        for (int j1 = 0; j1 < l; ++j1)
            for (int j2 = 0; j2 < l; ++j2) {
                const double v = potential(config, 2 * std::numbers::pi * j1 / l, 2 * std::numbers::pi * j2 / l);
                x[j1 * l + j2] *= std::exp(cplx(0, -v / hbar));
            }
        Vec p = to_momentum(x, l);
        for (int c1 = 0; c1 < l; ++c1)
            for (int c2 = 0; c2 < l; ++c2) {
                const double n1 = centred_n(c1, l), n2 = centred_n(c2, l);
                const double phase = (config.rotors[0].tau * n1 * n1 + config.rotors[1].tau * n2 * n2) * hbar * period / 2;
                p[c1 * l + c2] *= std::exp(cplx(0, -phase));
            }
        u.col(col) = p;
    }
    return u;
}

Eigen::MatrixXcd reduced_density_matrix(const StateVector& state) {
    if (state.rotors() < 2) throw UsageError("reduced_density_matrix: needs at least two rotors");
    const int l = state.basis();
    const std::size_t rest = state.size() / l;
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(l, l);
    for (int a = 0; a < l; ++a)
        for (int b = 0; b < l; ++b) {
            cplx acc{0, 0};
            for (std::size_t c = 0; c < rest; ++c) acc += state[a * rest + c] * std::conj(state[b * rest + c]);
            rho(a, b) = acc;
        }
    return rho;
}

std::vector<double> dense_reduced_spectrum(const StateVector& state) {
    const Eigen::MatrixXcd rho = reduced_density_matrix(state);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
    std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    std::sort(ev.begin(), ev.end(), std::greater<>());
    return ev;
}

OracleReport dense_oracle(const SystemConfig& config, int steps) {
    require_oracle_shape(config);
    if (steps < 0) throw UsageError("dense_oracle: steps must be >= 0");
    const int l = config.basis_size;
    const int dim = l * l;
    const Eigen::MatrixXcd u = dense_step_unitary(config);

    OracleReport report;
    report.steps = steps;
    report.unitarity_error = (u.adjoint() * u - Eigen::MatrixXcd::Identity(dim, dim)).cwiseAbs().maxCoeff();
    report.identity_deviation = (u - Eigen::MatrixXcd::Identity(dim, dim)).cwiseAbs().maxCoeff();

    Vec reference = Vec::Zero(dim);
    reference[(l / 2) * l + l / 2] = 1.0;  // n1 = n2 = 0

    const Propagator prop(config);
    StateVector psi = zero_momentum_product_state(config);

    for (int t = 1; t <= steps; ++t) {
        reference = u * reference;
        prop.step(psi);

        const Vec engine = to_oracle_order(psi);
        report.max_state_deviation = std::max(report.max_state_deviation, (engine - reference).cwiseAbs().maxCoeff());

        const auto dense = oracle_spectrum(reference, l);
        const auto fast = schmidt_spectrum(psi, t);
        for (std::size_t i = 0; i < dense.size(); ++i)
            report.max_spectrum_deviation =
                std::max(report.max_spectrum_deviation, std::abs(dense[i] - fast.eigenvalues[i]));
        report.max_von_neumann_deviation =
            std::max(report.max_von_neumann_deviation, std::abs(entropy_of(dense) - von_neumann(fast)));
        report.max_linear_entropy_deviation =
            std::max(report.max_linear_entropy_deviation, std::abs(linear_entropy_of(dense) - linear_entropy(fast)));
    }
    return report;
}

}  // namespace qkr
