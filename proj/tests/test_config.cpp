#include <doctest.h>

#include <sstream>

#include "qkr/config_io.hpp"

using namespace qkr;

namespace {

bool same(const SystemConfig& a, const SystemConfig& b) {
    if (a.rotors.size() != b.rotors.size()) return false;
    for (std::size_t i = 0; i < a.rotors.size(); ++i)
        if (a.rotors[i].tau != b.rotors[i].tau || a.rotors[i].kick_strength != b.rotors[i].kick_strength ||
            a.rotors[i].kick_phase != b.rotors[i].kick_phase)
            return false;
    return a.interaction.kind == b.interaction.kind && a.interaction.strength == b.interaction.strength &&
           a.resonance.period == b.resonance.period && a.resonance.r == b.resonance.r &&
           a.resonance.s == b.resonance.s && a.resonance.detuning == b.resonance.detuning &&
           a.basis_size == b.basis_size && a.horizon == b.horizon && a.observe_top_k == b.observe_top_k &&
           a.memory_budget == b.memory_budget && a.wrap_guard == b.wrap_guard;
}

}  // namespace

TEST_CASE("parse a full config") {
    std::istringstream in(R"(# two rotors
basis_size = 256
horizon = 300   ; trailing comment
wrap_guard = error

[interaction]
kind = nearest_neighbor
strength = 0.1

[resonance]
period = 12
detuning = 1e-4

[rotors.1]
tau = 1
kick_strength = 4
kick_phase = 0.1

[rotors.2]
tau = 3
kick_strength = 5
kick_phase = 0.15
)");
    const auto cfg = parse_config(in);
    CHECK(validate(cfg).ok());
    CHECK(cfg.basis_size == 256);
    CHECK(cfg.horizon == 300);
    CHECK(cfg.wrap_guard == WrapGuard::Error);
    CHECK(cfg.interaction.kind == InteractionKind::NearestNeighbor);
    CHECK(cfg.resonance.detuning == 1e-4);
    REQUIRE(cfg.rotors.size() == 2);
    CHECK(cfg.rotors[1].tau == 3);
    CHECK(cfg.rotors[0].kick_phase == 0.1);
}

TEST_CASE("dotted overrides reach every field") {
    auto cfg = reference_two_rotor_config();
    apply_override(cfg, "rotors.1.kick_strength=0");
    apply_override(cfg, " rotors.2.kick_phase = 0.5 ");
    apply_override(cfg, "interaction.strength=0.2");
    apply_override(cfg, "resonance.s=2");
    apply_override(cfg, "observe_top_k=3");
    apply_override(cfg, "memory_budget=1000000000");
    CHECK(cfg.rotors[0].kick_strength == 0.0);
    CHECK(cfg.rotors[1].kick_phase == 0.5);
    CHECK(cfg.interaction.strength == 0.2);
    CHECK(cfg.resonance.s == 2);
    CHECK(cfg.observe_top_k == 3);
    CHECK(cfg.memory_budget == 1000000000u);

    apply_override(cfg, "basis_size=64");
    apply_override(cfg, "rotors.3.kick_strength=5.5");
    CHECK(cfg.rotors.size() == 3);
    CHECK_FALSE(validate(cfg).ok());  // tau still unset
    apply_override(cfg, "rotors.3.tau=3");
    CHECK(validate(cfg).ok());
    apply_override(cfg, "rotors.count=2");
    CHECK(cfg.rotors.size() == 2);
}

TEST_CASE("bad keys and values") {
    auto cfg = reference_two_rotor_config();
    CHECK_THROWS_AS(apply_override(cfg, "basis_size"), ConfigError);
    CHECK_THROWS_AS(apply_override(cfg, "nonsense=1"), ConfigError);
    CHECK_THROWS_AS(apply_override(cfg, "horizon=ten"), ConfigError);
    CHECK_THROWS_AS(apply_override(cfg, "rotors.0.tau=1"), ConfigError);
    CHECK_THROWS_AS(apply_override(cfg, "rotors.1.mass=1"), ConfigError);
    CHECK_THROWS_AS(apply_override(cfg, "interaction.kind=ring"), UsageError);
    std::istringstream in("[interaction\nkind = none\n");
    CHECK_THROWS_AS(parse_config(in), ConfigError);
}

TEST_CASE("format_config round trip") {
    for (auto cfg : {reference_two_rotor_config(), reference_three_rotor_config(InteractionKind::NearestNeighbor)}) {
        cfg.resonance.detuning = 1.0 / 3.0 * 1e-4;
        std::istringstream in(format_config(cfg));
        CHECK(same(parse_config(in), cfg));
    }
}

TEST_CASE("missing config file is an I/O error") {
    CHECK_THROWS_AS(load_config("/nonexistent/qkr.cfg"), IoError);
}

TEST_CASE("config JSON snapshot") {
    const auto j = config_to_json(reference_two_rotor_config());
    CHECK(j["basis_size"] == 1024);
    CHECK(j["rotors"].size() == 2);
    CHECK(j["interaction"]["kind"] == "all_to_all");
    CHECK(j["resonance"]["effective_planck"].get<double>() == doctest::Approx(1.0471975512));
    auto bad = reference_two_rotor_config();
    bad.resonance.detuning = -20;
    CHECK(config_to_json(bad)["resonance"]["effective_planck"].is_null());
}
