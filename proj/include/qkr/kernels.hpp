#pragma once

// Data-parallel inner loops of the split-step propagator. Each kernel has an
// OpenMP version used by the engine and a plain serial version written for
// clarity; the unit tests and qkr_bench compare the two.

#include <complex>
#include <span>
#include <vector>

#include "qkr/model.hpp"

namespace qkr::kernels {

using cplx = std::complex<double>;

struct GridShape {
    int rotors;
    int basis;
};

/// Multiply every amplitude (position representation) by the interaction
/// phase. `table[m]` is the phase for lattice angle 2 pi m / L. All-to-all
/// indexes it with (sum_i j_i) mod L, nearest-neighbour multiplies one factor
/// per bond indexed with (j_a - j_b) mod L.
void apply_interaction_phases(std::span<cplx> amps, GridShape shape, InteractionKind kind,
                              std::span<const cplx> table);
void apply_interaction_phases_serial(std::span<cplx> amps, GridShape shape, InteractionKind kind,
                                     std::span<const cplx> table);

/// Multiply by prod_i phases[i][j_i] (per-rotor diagonal factors).
void apply_local_phases(std::span<cplx> amps, GridShape shape,
                        const std::vector<std::vector<cplx>>& phases);
void apply_local_phases_serial(std::span<cplx> amps, GridShape shape,
                               const std::vector<std::vector<cplx>>& phases);

/// Direct-summation unitary DFT along one axis; sign = +1 for
/// momentum -> position, -1 for the inverse. O(L) work per output point.
void axis_dft_serial(std::span<cplx> amps, GridShape shape, int axis, int sign);

/// Nearest-neighbour bonds used for a given rotor count: (0,1) for N = 2,
/// the ring (i, i+1 mod N) for N >= 3.
std::vector<std::pair<int, int>> nearest_neighbor_bonds(int rotors);

}  // namespace qkr::kernels
