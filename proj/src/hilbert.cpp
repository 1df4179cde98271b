#include "qkr/hilbert.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <istream>
#include <mutex>
#include <numbers>
#include <ostream>

#include <fftw3.h>

namespace qkr {

namespace {

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

std::size_t ipow(int base, int exp) {
    std::size_t r = 1;
    for (int i = 0; i < exp; ++i) r *= static_cast<std::size_t>(base);
    return r;
}

std::size_t largest_divisor_at_most(std::size_t value, std::size_t cap) {
    for (std::size_t d = std::min(value, cap); d > 1; --d)
        if (value % d == 0) return d;
    return 1;
}

}  // namespace

StateVector::StateVector(int rotors, int basis, Representation repr)
    : rotors_(rotors), basis_(basis), repr_(repr), amps_(ipow(basis, rotors)) {}

std::size_t StateVector::offset(std::span<const int> slots) const {
    std::size_t idx = 0;
    for (int s : slots) idx = idx * basis_ + static_cast<std::size_t>(s);
    return idx;
}

std::size_t StateVector::stride(int axis) const { return ipow(basis_, rotors_ - 1 - axis); }

double StateVector::norm() const {
    double acc = 0;
    for (const auto& a : amps_) acc += std::norm(a);
    return std::sqrt(acc);
}

Grids make_grids(int basis, double planck) {
    Grids g;
    g.momentum_numbers.resize(basis);
    g.momenta.resize(basis);
    g.positions.resize(basis);
    for (int k = 0; k < basis; ++k) {
        g.momentum_numbers[k] = momentum_number(k, basis);
        g.momenta[k] = g.momentum_numbers[k] * planck;
        g.positions[k] = 2.0 * std::numbers::pi * k / basis;
    }
    return g;
}

StateVector zero_momentum_product_state(const SystemConfig& config) {
    StateVector psi(config.rotor_count(), config.basis_size, Representation::Momentum);
    // slot 0 is n = 0 on every axis
    psi[0] = 1.0;
    return psi;
}

// One FFTW plan per (axis, direction). Each plan transforms `chunk` lines of
// length L spaced by the axis stride; the engine runs it over every
// (outer block, chunk) pair in parallel.
struct SpectralTransform::Impl {
    struct AxisPlan {
        fftw_plan forward = nullptr;   // position -> momentum, sign -1
        fftw_plan backward = nullptr;  // momentum -> position, sign +1
        std::size_t stride = 1;
        std::size_t outer = 1;
        std::size_t chunk = 1;
    };
    int rotors;
    int basis;
    std::vector<AxisPlan> axes;

    Impl(int n, int l) : rotors(n), basis(l) {
        std::lock_guard lock(planner_mutex());
        axes.resize(n);
        for (int a = 0; a < n; ++a) {
            auto& ap = axes[a];
            ap.stride = ipow(l, n - 1 - a);
            ap.outer = ipow(l, a);
            ap.chunk = largest_divisor_at_most(ap.stride, 64);
            std::vector<cplx> scratch(static_cast<std::size_t>(l) * ap.stride);
            auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
            const int len = l;
            const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
            ap.forward = fftw_plan_many_dft(1, &len, static_cast<int>(ap.chunk), buf, nullptr,
                                            static_cast<int>(ap.stride), 1, buf, nullptr,
                                            static_cast<int>(ap.stride), 1, FFTW_FORWARD, flags);
            ap.backward = fftw_plan_many_dft(1, &len, static_cast<int>(ap.chunk), buf, nullptr,
                                             static_cast<int>(ap.stride), 1, buf, nullptr,
                                             static_cast<int>(ap.stride), 1, FFTW_BACKWARD, flags);
            if (!ap.forward || !ap.backward) throw std::runtime_error("FFTW planning failed");
        }
    }

    ~Impl() {
        std::lock_guard lock(planner_mutex());
        for (auto& ap : axes) {
            if (ap.forward) fftw_destroy_plan(ap.forward);
            if (ap.backward) fftw_destroy_plan(ap.backward);
        }
    }

    void run(std::span<cplx> amps, bool to_position) const {
        for (const auto& ap : axes) {
            const fftw_plan plan = to_position ? ap.backward : ap.forward;
            const std::size_t chunks = ap.stride / ap.chunk;
            const auto tasks = static_cast<long long>(ap.outer * chunks);
            const std::size_t block = static_cast<std::size_t>(basis) * ap.stride;
            cplx* data = amps.data();
#pragma omp parallel for schedule(static)
            for (long long t = 0; t < tasks; ++t) {
                const std::size_t o = static_cast<std::size_t>(t) / chunks;
                const std::size_t c = static_cast<std::size_t>(t) % chunks;
                auto* p = reinterpret_cast<fftw_complex*>(data + o * block + c * ap.chunk);
                fftw_execute_dft(plan, p, p);
            }
        }
        const double scale = std::pow(static_cast<double>(basis), -0.5 * rotors);
        const auto size = static_cast<long long>(amps.size());
        cplx* data = amps.data();
#pragma omp parallel for schedule(static)
        for (long long i = 0; i < size; ++i) data[i] *= scale;
    }
};

SpectralTransform::SpectralTransform(int rotors, int basis)
    : impl_(std::make_unique<Impl>(rotors, basis)) {}
SpectralTransform::~SpectralTransform() = default;
SpectralTransform::SpectralTransform(SpectralTransform&&) noexcept = default;
SpectralTransform& SpectralTransform::operator=(SpectralTransform&&) noexcept = default;

void SpectralTransform::apply(StateVector& state, DftDirection direction) const {
    if (state.rotors() != impl_->rotors || state.basis() != impl_->basis)
        throw UsageError("SpectralTransform: state shape does not match the plan");
    const bool to_position = direction == DftDirection::MomentumToPosition;
    const auto expected = to_position ? Representation::Momentum : Representation::Position;
    if (state.representation() != expected)
        throw UsageError(to_position ? "axis_dft: state is not in the momentum representation"
                                     : "axis_dft: state is not in the position representation");
    impl_->run(state.amplitudes(), to_position);
    state.set_representation(to_position ? Representation::Position : Representation::Momentum);
}

StateVector axis_dft(StateVector state, DftDirection direction) {
    SpectralTransform(state.rotors(), state.basis()).apply(state, direction);
    return state;
}

BipartitionMap bipartition_matrix(const StateVector& state) {
    if (state.rotors() < 2) throw UsageError("bipartition_matrix: needs at least two rotors");
    if (state.representation() != Representation::Momentum)
        throw UsageError("bipartition_matrix: state must be in the momentum representation");
    const auto rows = static_cast<Eigen::Index>(state.basis());
    const auto cols = static_cast<Eigen::Index>(state.size() / state.basis());
    return BipartitionMap(state.amplitudes().data(), rows, cols);
}

double edge_occupancy(const StateVector& state) {
    const int l = state.basis();
    const int n = state.rotors();
    const int width = std::max(1, l / 16);
    // edge slots: n >= L/2 - width (slots L/2-width .. L/2-1) and
    // n < -L/2 + width (slots L/2 .. L/2+width-1)
    std::vector<char> is_edge(l, 0);
    for (int k = l / 2 - width; k < l / 2 + width; ++k) is_edge[k] = 1;

    double worst = 0;
    auto amps = state.amplitudes();
    for (int a = 0; a < n; ++a) {
        const std::size_t stride = state.stride(a);
        double mass = 0;
        for (std::size_t i = 0; i < amps.size(); ++i) {
            const int slot = static_cast<int>((i / stride) % l);
            if (is_edge[slot]) mass += std::norm(amps[i]);
        }
        worst = std::max(worst, mass);
    }
    return worst;
}

namespace {

template <class T>
void put_le(std::ostream& os, T value) {
    static_assert(std::endian::native == std::endian::little, "big-endian hosts unsupported");
    os.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <class T>
T get_le(std::istream& is) {
    T value{};
    is.read(reinterpret_cast<char*>(&value), sizeof(T));
    if (!is) throw std::runtime_error("read_dump: truncated header or payload");
    return value;
}

}  // namespace

void write_dump(std::ostream& os, const StateVector& state, std::int64_t kick) {
    put_le<std::int32_t>(os, state.rotors());
    put_le<std::int32_t>(os, state.basis());
    put_le<std::int32_t>(os, state.representation() == Representation::Momentum ? 0 : 1);
    put_le<std::int64_t>(os, kick);
    for (const auto& a : state.amplitudes()) {
        put_le<double>(os, a.real());
        put_le<double>(os, a.imag());
    }
}

StateVector read_dump(std::istream& is, std::int64_t* kick) {
    const auto n = get_le<std::int32_t>(is);
    const auto l = get_le<std::int32_t>(is);
    const auto repr = get_le<std::int32_t>(is);
    const auto k = get_le<std::int64_t>(is);
    if (n < 1 || l < 1 || (repr != 0 && repr != 1) || n > 32)
        throw std::runtime_error("read_dump: malformed header");
    StateVector psi(n, l, repr == 0 ? Representation::Momentum : Representation::Position);
    for (auto& a : psi.amplitudes()) {
        const double re = get_le<double>(is);
        const double im = get_le<double>(is);
        a = {re, im};
    }
    if (kick) *kick = k;
    return psi;
}

}  // namespace qkr
