#include "qkr/analytics.hpp"

#include <cmath>
#include <string>

namespace qkr {

namespace {

// Below this the two leading power-series terms are exact to double precision.
constexpr double kSeriesArgument = 1e-8;

void check_argument(double x) {
    if (!std::isfinite(x) || x < 0) throw DomainError("Bessel argument must be finite and >= 0");
}

}  // namespace

int bessel_table_order(double x) {
    check_argument(x);
    // ceil(x) + 40 alone loses digits for x >~ 100; the cube-root term covers
    // the widening turning-point region.
    int m = static_cast<int>(std::ceil(x)) + 40 + static_cast<int>(std::ceil(10.0 * std::cbrt(x)));
    return m + (m % 2);
}

std::vector<double> bessel_table(double x) {
    const int top = bessel_table_order(x);
    std::vector<double> j(static_cast<std::size_t>(top) + 2, 0.0);

    if (x < kSeriesArgument) {
        // J_n(x) ~ (x/2)^n / n! * (1 - (x/2)^2 / (n+1))
        const double half = 0.5 * x;
        double term = 1.0;
        for (int n = 0; n <= top; ++n) {
            if (n > 0) term *= half / n;
            j[n] = term * (1.0 - half * half / (n + 1));
            if (term == 0.0) break;
        }
        j.resize(static_cast<std::size_t>(top) + 1);
        return j;
    }

    j[top + 1] = 0.0;
    j[top] = 1e-300;
    for (int k = top; k >= 1; --k) {
        j[k - 1] = (2.0 * k / x) * j[k] - j[k + 1];
        if (std::abs(j[k - 1]) > 1e250) {
            for (int i = k - 1; i <= top + 1; ++i) j[i] *= 1e-250;
        }
    }
    double norm = j[0];
    for (int k = 2; k <= top; k += 2) norm += 2.0 * j[k];
    j.resize(static_cast<std::size_t>(top) + 1);
    for (auto& v : j) v /= norm;
    return j;
}

double bessel_j(int order, double x) {
    const int top = bessel_table_order(x);
    const int n = order < 0 ? -order : order;
    if (n > top)
        throw DomainError("Bessel order " + std::to_string(order) + " beyond table limit " +
                          std::to_string(top) + " for this argument");
    const double v = bessel_table(x)[n];
    return (order < 0 && (n % 2) == 1) ? -v : v;
}

int purity_truncation(double x) {
    check_argument(x);
    return static_cast<int>(std::ceil(x)) + 40;
}

double analytic_purity(double coupling, double t, double planck) {
    if (!(coupling >= 0) || !(t >= 0) || !(planck > 0))
        throw DomainError("analytic_purity: need K >= 0, t >= 0, hbar > 0");
    const double x = coupling * t / planck;
    const auto table = bessel_table(x);
    const int m = purity_truncation(x);
    double sum = 0;
    // accumulate small terms first
    for (int n = m; n >= 1; --n) {
        const double j2 = table[n] * table[n];
        sum += 2.0 * j2 * j2;
    }
    const double j0 = table[0] * table[0];
    return sum + j0 * j0;
}

double analytic_linear_entropy(double coupling, double t, double planck) {
    return 1.0 - analytic_purity(coupling, t, planck);
}

double MomentumDistribution::at(int n) const {
    if (n < -max_order || n > max_order) return 0.0;
    return probability[static_cast<std::size_t>(n + max_order)];
}

double MomentumDistribution::second_moment() const {
    double m2 = 0;
    for (int n = -max_order; n <= max_order; ++n) m2 += static_cast<double>(n) * n * at(n);
    return m2;
}

MomentumDistribution resonant_single_rotor_distribution(double kick, double t, double planck) {
    if (!(kick >= 0) || !(t >= 0) || !(planck > 0))
        throw DomainError("resonant_single_rotor_distribution: need K >= 0, t >= 0, hbar > 0");
    const double x = kick * t / planck;
    const auto table = bessel_table(x);
    MomentumDistribution dist;
    dist.max_order = static_cast<int>(table.size()) - 1;
    dist.probability.resize(2 * static_cast<std::size_t>(dist.max_order) + 1);
    for (int n = -dist.max_order; n <= dist.max_order; ++n) {
        const double v = table[static_cast<std::size_t>(n < 0 ? -n : n)];
        dist.probability[static_cast<std::size_t>(n + dist.max_order)] = v * v;
    }
    return dist;
}

EffectiveModel reduce_to_effective(const SystemConfig& config) {
    require_valid(config);
    if (config.interaction.kind != InteractionKind::AllToAll)
        throw UnsupportedReduction("single-rotor reduction needs the all-to-all interaction");
    const auto& res = config.resonance;
    if (!res.exact())
        throw UnsupportedReduction("single-rotor reduction needs exact resonance (detuning = 0)");
    for (const auto& rot : config.rotors)
        if ((static_cast<long long>(rot.tau) * res.r) % res.s != 0)
            throw UnsupportedReduction("free evolution is not the identity for tau = " +
                                       std::to_string(rot.tau));
    EffectiveModel eff;
    eff.effective_kick = config.interaction.strength;
    eff.eta = config.rotor_count() == 2 ? config.rotors[0].tau - config.rotors[1].tau : 0;
    eff.planck = effective_planck(res);
    eff.period = res.period;
    return eff;
}

}  // namespace qkr
