#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "qkr/model.hpp"

namespace qkr {

using cplx = std::complex<double>;

enum class Representation { Momentum, Position };
enum class DftDirection { MomentumToPosition, PositionToMomentum };

// Momentum slots are stored in FFT order: slot k holds momentum number
// n = k for k < L/2 and n = k - L otherwise, so n runs over [-L/2, L/2).
inline int momentum_number(int slot, int basis) { return slot < basis / 2 ? slot : slot - basis; }
inline int momentum_slot(int n, int basis) { return n >= 0 ? n : n + basis; }

/// Tensor-product state on L^N grid points, rotor 1 varying slowest.
class StateVector {
  public:
    StateVector() = default;
    StateVector(int rotors, int basis, Representation repr);

    int rotors() const { return rotors_; }
    int basis() const { return basis_; }
    std::size_t size() const { return amps_.size(); }
    Representation representation() const { return repr_; }
    void set_representation(Representation repr) { repr_ = repr; }

    std::span<cplx> amplitudes() { return amps_; }
    std::span<const cplx> amplitudes() const { return amps_; }
    cplx& operator[](std::size_t i) { return amps_[i]; }
    const cplx& operator[](std::size_t i) const { return amps_[i]; }

    /// Flat offset of a multi-index of slots (one per rotor).
    std::size_t offset(std::span<const int> slots) const;
    /// Stride of rotor `axis` (0-based): L^(N-1-axis).
    std::size_t stride(int axis) const;

    double norm() const;

  private:
    int rotors_ = 0;
    int basis_ = 0;
    Representation repr_ = Representation::Momentum;
    std::vector<cplx> amps_;
};

struct Grids {
    std::vector<int> momentum_numbers;  // in storage (FFT) order
    std::vector<double> momenta;        // n * hbar
    std::vector<double> positions;      // 2 pi j / L
};

Grids make_grids(int basis, double planck);

StateVector zero_momentum_product_state(const SystemConfig& config);

/// Per-axis unitary DFT over all rotors, backed by cached FFTW plans.
/// Momentum -> position: c_x(j) = L^-1/2 sum_n c_p(n) exp(+i n x_j).
class SpectralTransform {
  public:
    SpectralTransform(int rotors, int basis);
    ~SpectralTransform();
    SpectralTransform(SpectralTransform&&) noexcept;
    SpectralTransform& operator=(SpectralTransform&&) noexcept;

    void apply(StateVector& state, DftDirection direction) const;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Convenience wrapper that plans, transforms, and discards the plans.
StateVector axis_dft(StateVector state, DftDirection direction);

using BipartitionMap =
    Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;

/// Zero-copy L x L^(N-1) view with rotor 1 as the row index.
BipartitionMap bipartition_matrix(const StateVector& state);

/// Largest marginal probability, over rotors, in the outermost max(1, L/16)
/// momentum states at either end of the grid.
double edge_occupancy(const StateVector& state);

// Binary dump: int32 N, int32 L, int32 representation (0 momentum,
// 1 position), int64 kick index, then L^N little-endian interleaved
// (real, imag) doubles in storage order.
void write_dump(std::ostream& os, const StateVector& state, std::int64_t kick);
StateVector read_dump(std::istream& is, std::int64_t* kick = nullptr);

}  // namespace qkr
