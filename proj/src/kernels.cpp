#include "qkr/kernels.hpp"

#include <cmath>
#include <numbers>

namespace qkr::kernels {

namespace {

std::size_t ipow(int base, int exp) {
    std::size_t r = 1;
    for (int i = 0; i < exp; ++i) r *= static_cast<std::size_t>(base);
    return r;
}

// Digits of a flat index, most significant (rotor 1) first.
void decode(std::size_t flat, GridShape shape, int* digits) {
    for (int a = shape.rotors - 1; a >= 0; --a) {
        digits[a] = static_cast<int>(flat % shape.basis);
        flat /= shape.basis;
    }
}

inline int wrap(int m, int l) {
    m %= l;
    return m < 0 ? m + l : m;
}

}  // namespace

std::vector<std::pair<int, int>> nearest_neighbor_bonds(int rotors) {
    std::vector<std::pair<int, int>> bonds;
    if (rotors < 2) return bonds;
    if (rotors == 2) return {{0, 1}};
    for (int i = 0; i < rotors; ++i) bonds.emplace_back(i, (i + 1) % rotors);
    return bonds;
}

void apply_interaction_phases(std::span<cplx> amps, GridShape shape, InteractionKind kind,
                              std::span<const cplx> table) {
    if (kind == InteractionKind::None) return;
    const int l = shape.basis;
    const int n = shape.rotors;
    const auto blocks = static_cast<long long>(amps.size() / l);
    cplx* data = amps.data();
    const cplx* tab = table.data();

    if (kind == InteractionKind::AllToAll) {
#pragma omp parallel for schedule(static)
        for (long long b = 0; b < blocks; ++b) {
            auto rem = static_cast<std::size_t>(b);
            int sum = 0;
            for (int a = 0; a < n - 1; ++a) {
                sum += static_cast<int>(rem % l);
                rem /= l;
            }
            int m = sum % l;
            cplx* row = data + static_cast<std::size_t>(b) * l;
            for (int j = 0; j < l; ++j) {
                row[j] *= tab[m];
                if (++m == l) m = 0;
            }
        }
        return;
    }

    // Nearest neighbour: bonds not touching the last rotor give a per-row
    // factor; the (at most two) bonds touching it vary along the row.
    const auto bonds = nearest_neighbor_bonds(n);
    const int last = n - 1;
#pragma omp parallel for schedule(static)
    for (long long b = 0; b < blocks; ++b) {
        int digits[64];
        auto rem = static_cast<std::size_t>(b);
        for (int a = n - 2; a >= 0; --a) {
            digits[a] = static_cast<int>(rem % l);
            rem /= l;
        }
        cplx row_factor{1.0, 0.0};
        int left = -1;   // partner p of bond (p, last)
        int right = -1;  // partner q of bond (last, q)
        for (const auto& [p, q] : bonds) {
            if (q == last) left = p;
            else if (p == last) right = q;
            else row_factor *= tab[wrap(digits[p] - digits[q], l)];
        }
        cplx* row = data + static_cast<std::size_t>(b) * l;
        for (int j = 0; j < l; ++j) {
            cplx f = row_factor;
            if (left >= 0) f *= tab[wrap(digits[left] - j, l)];
            if (right >= 0) f *= tab[wrap(j - digits[right], l)];
            row[j] *= f;
        }
    }
}

void apply_interaction_phases_serial(std::span<cplx> amps, GridShape shape, InteractionKind kind,
                                     std::span<const cplx> table) {
    if (kind == InteractionKind::None) return;
    const int l = shape.basis;
    const auto bonds = nearest_neighbor_bonds(shape.rotors);
    std::vector<int> digits(shape.rotors);
    for (std::size_t i = 0; i < amps.size(); ++i) {
        decode(i, shape, digits.data());
        if (kind == InteractionKind::AllToAll) {
            int sum = 0;
            for (int d : digits) sum += d;
            amps[i] *= table[sum % l];
        } else {
            cplx f{1.0, 0.0};
            for (const auto& [p, q] : bonds) f *= table[wrap(digits[p] - digits[q], l)];
            amps[i] *= f;
        }
    }
}

void apply_local_phases(std::span<cplx> amps, GridShape shape,
                        const std::vector<std::vector<cplx>>& phases) {
    const int l = shape.basis;
    const int n = shape.rotors;
    const auto blocks = static_cast<long long>(amps.size() / l);
    cplx* data = amps.data();
    const cplx* last = phases[n - 1].data();
#pragma omp parallel for schedule(static)
    for (long long b = 0; b < blocks; ++b) {
        auto rem = static_cast<std::size_t>(b);
        cplx prefix{1.0, 0.0};
        for (int a = n - 2; a >= 0; --a) {
            prefix *= phases[a][rem % l];
            rem /= l;
        }
        cplx* row = data + static_cast<std::size_t>(b) * l;
        for (int j = 0; j < l; ++j) row[j] *= prefix * last[j];
    }
}

void apply_local_phases_serial(std::span<cplx> amps, GridShape shape,
                               const std::vector<std::vector<cplx>>& phases) {
    std::vector<int> digits(shape.rotors);
    for (std::size_t i = 0; i < amps.size(); ++i) {
        decode(i, shape, digits.data());
        cplx f{1.0, 0.0};
        for (int a = 0; a < shape.rotors; ++a) f *= phases[a][digits[a]];
        amps[i] *= f;
    }
}

void axis_dft_serial(std::span<cplx> amps, GridShape shape, int axis, int sign) {
    const int l = shape.basis;
    const std::size_t stride = ipow(l, shape.rotors - 1 - axis);
    const std::size_t outer = ipow(l, axis);
    const double scale = 1.0 / std::sqrt(static_cast<double>(l));

    std::vector<cplx> twiddle(l);
    for (int m = 0; m < l; ++m)
        twiddle[m] = std::polar(1.0, sign * 2.0 * std::numbers::pi * m / l);

    std::vector<cplx> line(l);
    for (std::size_t o = 0; o < outer; ++o) {
        for (std::size_t inner = 0; inner < stride; ++inner) {
            const std::size_t base = o * l * stride + inner;
            for (int k = 0; k < l; ++k) line[k] = amps[base + k * stride];
            for (int j = 0; j < l; ++j) {
                cplx acc{0.0, 0.0};
                for (int k = 0; k < l; ++k)
                    acc += line[k] * twiddle[(static_cast<long long>(k) * j) % l];
                amps[base + j * stride] = acc * scale;
            }
        }
    }
}

}  // namespace qkr::kernels
