#pragma once

#include <vector>

#include <Eigen/Core>

#include "qkr/hilbert.hpp"
#include "qkr/model.hpp"

namespace qkr {

// Brute-force reference for small two-rotor systems. Nothing here touches
// the engine's FFT, kernels, or phase tables: the Floquet unitary is built
// column by column from a direct-summation DFT and directly evaluated
// potentials, in centred momentum order (index n + L/2).

inline constexpr int kOracleMaxBasis = 16;

/// Dense L^2 x L^2 one-period unitary. Requires N = 2 and L <= 16.
Eigen::MatrixXcd dense_step_unitary(const SystemConfig& config);

/// rho_1 by explicit partial trace over rotors 2..N (any N).
Eigen::MatrixXcd reduced_density_matrix(const StateVector& state);

/// Eigenvalues of the dense rho_1, descending.
std::vector<double> dense_reduced_spectrum(const StateVector& state);

struct OracleReport {
    int steps = 0;
    double max_state_deviation = 0;
    double max_von_neumann_deviation = 0;
    double max_linear_entropy_deviation = 0;
    double max_spectrum_deviation = 0;
    double unitarity_error = 0;  // max |U^dagger U - 1|
    double identity_deviation = 0;  // max |U - 1|
};

/// Evolves the zero-momentum state with both the engine and the dense
/// unitary for `steps` kicks and reports the worst deviations seen.
OracleReport dense_oracle(const SystemConfig& config, int steps);

}  // namespace qkr
