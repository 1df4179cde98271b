#pragma once

#include <cmath>
#include <complex>
#include <random>

#include "qkr/hilbert.hpp"

namespace qkr::test {

inline StateVector random_state(int rotors, int basis, unsigned seed,
                                Representation repr = Representation::Momentum) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    StateVector s(rotors, basis, repr);
    double n2 = 0;
    for (auto& a : s.amplitudes()) {
        a = {g(rng), g(rng)};
        n2 += std::norm(a);
    }
    const double inv = 1.0 / std::sqrt(n2);
    for (auto& a : s.amplitudes()) a *= inv;
    return s;
}

// J_n(x) from the ascending series, summed in long double. Independent of
// the library's recurrence; adequate for x <= ~15.
inline double bessel_series(int n, double x) {
    const bool neg = n < 0;
    const int m = neg ? -n : n;
    long double half = static_cast<long double>(x) / 2;
    long double term = 1;
    for (int i = 1; i <= m; ++i) term *= half / i;
    long double sum = 0;
    for (int k = 0; k < 200; ++k) {
        sum += term;
        term *= -half * half / ((k + 1.0L) * (k + 1.0L + m));
        if (std::fabs(static_cast<double>(term)) < 1e-40 && k > static_cast<int>(x)) break;
    }
    const double v = static_cast<double>(sum);
    return neg && (m % 2) ? -v : v;
}

inline double max_abs_diff(std::span<const cplx> a, std::span<const cplx> b) {
    double d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

}  // namespace qkr::test
