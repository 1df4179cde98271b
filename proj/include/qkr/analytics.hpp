#pragma once

#include <vector>

#include "qkr/model.hpp"

namespace qkr {

/// The requested configuration has no single-rotor reduction.
class UnsupportedReduction : public UsageError {
  public:
    using UsageError::UsageError;
};

/// Highest order held in the Bessel table for argument x. Miller's downward
/// recurrence starts here.
int bessel_table_order(double x);

/// J_0(x) .. J_M(x) for M = bessel_table_order(x), by Miller's downward
/// recurrence normalised with J_0 + 2 sum_k J_2k = 1.
std::vector<double> bessel_table(double x);

/// J_n(x) for |n| <= bessel_table_order(x), using J_-n = (-1)^n J_n.
/// Throws DomainError for x < 0, non-finite x, or an order beyond the table.
double bessel_j(int order, double x);

/// Orders summed by analytic_purity: |n| <= ceil(x) + 40.
int purity_truncation(double x);

/// sum_n J_n(K t / hbar)^4: participation ratio of the resonant single rotor,
/// equal to the one-rotor purity of the all-to-all coupled system.
double analytic_purity(double coupling, double t, double planck);

/// 1 - analytic_purity.
double analytic_linear_entropy(double coupling, double t, double planck);

/// P(n) = J_n(K t / hbar)^2 for n in [-M, M]; index i holds n = i - M.
struct MomentumDistribution {
    int max_order = 0;
    std::vector<double> probability;

    double at(int n) const;
    double second_moment() const;
};

MomentumDistribution resonant_single_rotor_distribution(double kick, double t, double planck);

/// Single kicked rotor that the all-to-all model reduces to at exact
/// resonance. eta = tau_1 - tau_2 is bookkeeping for the two-rotor case
/// (zero otherwise).
struct EffectiveModel {
    double effective_kick = 0;
    int eta = 0;
    double planck = 0;
    double period = 0;
};

/// Throws UsageError for off-resonant or non all-to-all configurations.
EffectiveModel reduce_to_effective(const SystemConfig& config);

}  // namespace qkr
