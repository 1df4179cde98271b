#include "qkr/model.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace qkr {

std::uint64_t SystemConfig::dimension() const {
    if (basis_size <= 0 || rotors.empty()) return 0;
    std::uint64_t dim = 1;
    const auto l = static_cast<std::uint64_t>(basis_size);
    for (std::size_t i = 0; i < rotors.size(); ++i) {
        if (dim > UINT64_MAX / l) return 0;
        dim *= l;
    }
    return dim;
}

std::string ValidationReport::to_string() const {
    if (ok()) return "ok";
    std::ostringstream os;
    for (const auto& f : failures) os << "  - " << f << '\n';
    return os.str();
}

ValidationReport validate(const SystemConfig& config) {
    ValidationReport report;
    auto fail = [&](std::string msg) { report.failures.push_back(std::move(msg)); };

    const int n = config.rotor_count();
    if (n < 1) fail("at least one rotor is required");

    for (int i = 0; i < n; ++i) {
        const auto& rot = config.rotors[i];
        const std::string key = "rotors." + std::to_string(i + 1) + ".";
        if (rot.tau < 1) fail(key + "tau must be an integer >= 1");
        if (!std::isfinite(rot.kick_strength) || rot.kick_strength < 0)
            fail(key + "kick_strength must be finite and >= 0");
        if (!std::isfinite(rot.kick_phase)) fail(key + "kick_phase must be finite");
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (config.rotors[i].tau == config.rotors[j].tau)
                fail("rotors " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                     " have tau ratio 1 (duplicate tau = " +
                     std::to_string(config.rotors[i].tau) + ")");

    const auto& inter = config.interaction;
    if (!std::isfinite(inter.strength) || inter.strength < 0)
        fail("interaction.strength must be finite and >= 0");
    if (inter.kind == InteractionKind::NearestNeighbor && n < 2)
        fail("nearest_neighbor interaction needs at least two rotors");

    const auto& res = config.resonance;
    if (!std::isfinite(res.period) || res.period <= 0) fail("resonance.period must be > 0");
    if (res.r < 1) fail("resonance.r must be an integer >= 1");
    if (res.s < 1) fail("resonance.s must be an integer >= 1");
    if (!std::isfinite(res.detuning)) fail("resonance.detuning must be finite");
    else if (res.period + res.detuning <= 0) fail("resonance.period + detuning must be > 0");

    const int l = config.basis_size;
    if (l < 4) fail("basis_size must be >= 4");
    if (l % 2 != 0) fail("basis_size must be even (got " + std::to_string(l) + ")");
    if (n >= 1 && l >= 4) {
        const auto dim = config.dimension();
        if (dim == 0 || dim > config.memory_budget)
            fail("basis_size^N exceeds the memory budget of " +
                 std::to_string(config.memory_budget) + " amplitudes");
    }
    if (config.horizon < 0) fail("horizon must be >= 0");
    if (config.observe_top_k < 0) fail("observe_top_k must be >= 0");
    return report;
}

void require_valid(const SystemConfig& config) {
    auto report = validate(config);
    if (!report.ok()) throw UsageError("invalid configuration:\n" + report.to_string());
}

double effective_planck(const ResonanceSpec& res) {
    const double period = res.period + res.detuning;
    if (!(period > 0) || !std::isfinite(period))
        throw DomainError("effective_planck: T + eps must be positive");
    if (res.r < 1 || res.s < 1) throw DomainError("effective_planck: r and s must be >= 1");
    return 4.0 * std::numbers::pi * res.r / (res.s * period);
}

double free_phase_turns(const ResonanceSpec& res, int tau, std::int64_t n) {
    // phase = tau hbar' n^2 T / 2 = 2 pi * (tau r n^2 / s) * T / (T + eps)
    const std::int64_t m = static_cast<std::int64_t>(tau) * res.r * n * n;
    const std::int64_t s = res.s;
    const double exact_part = static_cast<double>(m % s) / static_cast<double>(s);
    const double shift =
        static_cast<double>(m) * res.detuning / (static_cast<double>(s) * (res.period + res.detuning));
    double turns = exact_part - shift;
    turns -= std::floor(turns);
    return turns;
}

const char* to_string(InteractionKind kind) {
    switch (kind) {
        case InteractionKind::AllToAll: return "all_to_all";
        case InteractionKind::NearestNeighbor: return "nearest_neighbor";
        case InteractionKind::None: return "none";
    }
    return "?";
}

const char* to_string(WrapGuard guard) {
    switch (guard) {
        case WrapGuard::Error: return "error";
        case WrapGuard::Flag: return "flag";
        case WrapGuard::Off: return "off";
    }
    return "?";
}

InteractionKind parse_interaction_kind(const std::string& text) {
    if (text == "all_to_all" || text == "AllToAll") return InteractionKind::AllToAll;
    if (text == "nearest_neighbor" || text == "NearestNeighbor") return InteractionKind::NearestNeighbor;
    if (text == "none" || text == "None") return InteractionKind::None;
    throw UsageError("unknown interaction kind '" + text + "'");
}

WrapGuard parse_wrap_guard(const std::string& text) {
    if (text == "error") return WrapGuard::Error;
    if (text == "flag") return WrapGuard::Flag;
    if (text == "off") return WrapGuard::Off;
    throw UsageError("unknown wrap_guard policy '" + text + "'");
}

SystemConfig reference_two_rotor_config() {
    SystemConfig cfg;
    cfg.rotors = {{1, 4.0, 0.1}, {2, 5.0, 0.15}};
    cfg.interaction = {InteractionKind::AllToAll, 0.05};
    cfg.resonance = {12.0, 1, 1, 0.0};
    cfg.basis_size = 1 << 10;
    cfg.horizon = 1000;
    cfg.observe_top_k = 6;
    return cfg;
}

SystemConfig reference_three_rotor_config(InteractionKind kind) {
    SystemConfig cfg = reference_two_rotor_config();
    cfg.rotors.push_back({3, 5.5, 0.01});
    cfg.interaction.kind = kind;
    cfg.basis_size = 1 << 6;
    return cfg;
}

}  // namespace qkr
