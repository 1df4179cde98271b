#include "qkr/evolution.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qkr/kernels.hpp"

namespace qkr {

namespace {

constexpr double kIdentityTolerance = 1e-12;

std::vector<cplx> conjugated(const std::vector<cplx>& v) {
    std::vector<cplx> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::conj(v[i]);
    return out;
}

std::vector<std::vector<cplx>> conjugated(const std::vector<std::vector<cplx>>& v) {
    std::vector<std::vector<cplx>> out;
    out.reserve(v.size());
    for (const auto& x : v) out.push_back(conjugated(x));
    return out;
}

}  // namespace

FloquetPlan build_plan(const SystemConfig& config) {
    require_valid(config);
    FloquetPlan plan;
    plan.rotors = config.rotor_count();
    plan.basis = config.basis_size;
    plan.planck = effective_planck(config.resonance);
    plan.kind = config.interaction.kind;

    const int l = plan.basis;
    const double hbar = plan.planck;
    const auto grids = make_grids(l, hbar);

    plan.kick_phases.resize(plan.rotors);
    plan.free_phases.resize(plan.rotors);
    plan.resonant_identity = true;
    for (int i = 0; i < plan.rotors; ++i) {
        const auto& rot = config.rotors[i];
        auto& kick = plan.kick_phases[i];
        auto& free = plan.free_phases[i];
        kick.resize(l);
        free.resize(l);
        for (int j = 0; j < l; ++j) {
            kick[j] = std::polar(1.0, -rot.kick_strength * std::cos(grids.positions[j] + rot.kick_phase) / hbar);
            const double turns = free_phase_turns(config.resonance, rot.tau, grids.momentum_numbers[j]);
            free[j] = std::polar(1.0, -2.0 * std::numbers::pi * turns);
            if (std::abs(free[j] - 1.0) > kIdentityTolerance) plan.resonant_identity = false;
        }
    }

    const double coupling = config.interaction.effective_strength();
    plan.interaction_phases.resize(l);
    for (int m = 0; m < l; ++m)
        plan.interaction_phases[m] = std::polar(1.0, -coupling * std::cos(2.0 * std::numbers::pi * m / l) / hbar);
    return plan;
}

WrapAroundError::WrapAroundError(long kick, double occupancy)
    : std::runtime_error("momentum grid wrap-around at kick " + std::to_string(kick) +
                         " (edge occupancy " + std::to_string(occupancy) + ")"),
      kick_(kick),
      occupancy_(occupancy) {}

Propagator::Propagator(const SystemConfig& config) : Propagator(build_plan(config)) {}

Propagator::Propagator(FloquetPlan plan)
    : plan_(std::move(plan)), transform_(plan_.rotors, plan_.basis) {}

void Propagator::step(StateVector& state, KickOrder order) const {
    if (state.representation() != Representation::Momentum)
        throw UsageError("step: state must be in the momentum representation");
    const kernels::GridShape shape{plan_.rotors, plan_.basis};
    transform_.apply(state, DftDirection::MomentumToPosition);
    if (order == KickOrder::InteractionFirst) {
        kernels::apply_interaction_phases(state.amplitudes(), shape, plan_.kind, plan_.interaction_phases);
        kernels::apply_local_phases(state.amplitudes(), shape, plan_.kick_phases);
    } else {
        kernels::apply_local_phases(state.amplitudes(), shape, plan_.kick_phases);
        kernels::apply_interaction_phases(state.amplitudes(), shape, plan_.kind, plan_.interaction_phases);
    }
    transform_.apply(state, DftDirection::PositionToMomentum);
    if (!plan_.resonant_identity) kernels::apply_local_phases(state.amplitudes(), shape, plan_.free_phases);
}

void Propagator::step_inverse(StateVector& state) const {
    if (state.representation() != Representation::Momentum)
        throw UsageError("step_inverse: state must be in the momentum representation");
    const kernels::GridShape shape{plan_.rotors, plan_.basis};
    if (!plan_.resonant_identity)
        kernels::apply_local_phases(state.amplitudes(), shape, conjugated(plan_.free_phases));
    transform_.apply(state, DftDirection::MomentumToPosition);
    kernels::apply_local_phases(state.amplitudes(), shape, conjugated(plan_.kick_phases));
    kernels::apply_interaction_phases(state.amplitudes(), shape, plan_.kind,
                                      conjugated(plan_.interaction_phases));
    transform_.apply(state, DftDirection::PositionToMomentum);
}

StateVector step(StateVector state, const FloquetPlan& plan) {
    Propagator(plan).step(state);
    return state;
}

double mean_energy(const StateVector& state, const SystemConfig& config) {
    if (state.representation() != Representation::Momentum)
        throw UsageError("mean_energy: state must be in the momentum representation");
    const double hbar = effective_planck(config.resonance);
    const int l = state.basis();
    auto amps = state.amplitudes();
    double energy = 0;
    for (int a = 0; a < state.rotors(); ++a) {
        const std::size_t stride = state.stride(a);
        double n2 = 0;
        for (std::size_t i = 0; i < amps.size(); ++i) {
            const int n = momentum_number(static_cast<int>((i / stride) % l), l);
            n2 += static_cast<double>(n) * n * std::norm(amps[i]);
        }
        energy += 0.5 * config.rotors[a].tau * n2 * hbar * hbar;
    }
    return energy;
}

EntanglementTrace evolve(const SystemConfig& config, const EvolveOptions& options) {
    require_valid(config);
    const Propagator prop(config);
    StateVector psi = zero_momentum_product_state(config);

    EntanglementTrace trace;
    trace.top_k = config.observe_top_k;
    trace.records.reserve(static_cast<std::size_t>(config.horizon) + 1);

    auto record = [&](long t) {
        EntanglementRecord rec;
        rec.t = t;
        rec.energy = mean_energy(psi, config);
        if (options.record_entanglement && psi.rotors() >= 2) {
            const auto spec = schmidt_spectrum(psi, t);
            rec.s_vn = von_neumann(spec);
            rec.purity = purity(spec);
            rec.s_lin = 1.0 - rec.purity;
            const auto k = std::min<std::size_t>(config.observe_top_k, spec.eigenvalues.size());
            rec.top_lambda.assign(spec.eigenvalues.begin(), spec.eigenvalues.begin() + k);
        }
        trace.records.push_back(std::move(rec));
        for (const auto& obs : options.observers) obs(t, psi);
    };

    record(0);
    for (long t = 1; t <= config.horizon; ++t) {
        prop.step(psi, options.order);
        if (config.wrap_guard != WrapGuard::Off && !trace.wrap_kick) {
            const double edge = edge_occupancy(psi);
            if (edge > kWrapThreshold) {
                if (config.wrap_guard == WrapGuard::Error) throw WrapAroundError(t, edge);
                if (!trace.wrap_kick) trace.wrap_kick = t;
            }
        }
        record(t);
    }
    return trace;
}

}  // namespace qkr
