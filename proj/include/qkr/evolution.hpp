#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "qkr/entanglement.hpp"
#include "qkr/hilbert.hpp"
#include "qkr/model.hpp"

namespace qkr {

/// Diagonal factors of one Floquet period.
struct FloquetPlan {
    int rotors = 0;
    int basis = 0;
    double planck = 0;
    InteractionKind kind = InteractionKind::None;
    std::vector<std::vector<cplx>> kick_phases;  // exp[-i K_i cos(x_j + Phi_i) / hbar']
    std::vector<cplx> interaction_phases;        // exp[-i K cos(2 pi m / L) / hbar']
    std::vector<std::vector<cplx>> free_phases;  // exp[-i tau_i hbar' n^2 T / 2], storage order
    bool resonant_identity = false;
};

FloquetPlan build_plan(const SystemConfig& config);

class WrapAroundError : public std::runtime_error {
  public:
    WrapAroundError(long kick, double occupancy);
    long kick() const { return kick_; }
    double occupancy() const { return occupancy_; }

  private:
    long kick_;
    double occupancy_;
};

/// Probability threshold in the edge region above which the guard trips.
inline constexpr double kWrapThreshold = 1e-8;

enum class KickOrder { InteractionFirst, KicksFirst };

/// Split-step Floquet propagator: position-diagonal interaction and kicks,
/// then momentum-diagonal free evolution (skipped at exact resonance).
class Propagator {
  public:
    explicit Propagator(const SystemConfig& config);
    explicit Propagator(FloquetPlan plan);

    const FloquetPlan& plan() const { return plan_; }

    void step(StateVector& state, KickOrder order = KickOrder::InteractionFirst) const;
    /// Exact inverse of step(): conjugated factors applied in reverse order.
    void step_inverse(StateVector& state) const;

  private:
    FloquetPlan plan_;
    SpectralTransform transform_;
};

StateVector step(StateVector state, const FloquetPlan& plan);

using Observer = std::function<void(long t, const StateVector& state)>;

struct EvolveOptions {
    std::vector<Observer> observers;
    bool record_entanglement = true;  // compute the Schmidt spectrum every kick
    KickOrder order = KickOrder::InteractionFirst;
};

/// Evolves the zero-momentum product state for config.horizon kicks and
/// records one trace row per kick, including t = 0. Observers run after the
/// trace row for that kick is recorded.
EntanglementTrace evolve(const SystemConfig& config, const EvolveOptions& options = {});

/// sum_i tau_i <p_i^2> / 2 with p = n hbar'.
double mean_energy(const StateVector& state, const SystemConfig& config);

}  // namespace qkr
