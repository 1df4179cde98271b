#include <doctest.h>

#include "qkr/oracle.hpp"

using namespace qkr;

namespace {

SystemConfig oracle_config() {
    auto cfg = reference_two_rotor_config();
    cfg.basis_size = 8;
    return cfg;
}

}  // namespace

TEST_CASE("engine matches the dense unitary at resonance") {
    const auto r = dense_oracle(oracle_config(), 5);
    CHECK(r.steps == 5);
    CHECK(r.max_state_deviation <= 1e-10);
    CHECK(r.max_von_neumann_deviation <= 1e-10);
    CHECK(r.max_linear_entropy_deviation <= 1e-10);
    CHECK(r.max_spectrum_deviation <= 1e-10);
    CHECK(r.unitarity_error < 1e-12);
}

TEST_CASE("engine matches the dense unitary off resonance") {
    auto cfg = oracle_config();
    cfg.resonance.detuning = 0.01;
    const auto r = dense_oracle(cfg, 5);
    CHECK(r.max_state_deviation <= 1e-10);
    CHECK(r.max_von_neumann_deviation <= 1e-10);
}

TEST_CASE("nearest-neighbour coupling and a larger grid") {
    auto cfg = oracle_config();
    cfg.basis_size = 16;
    cfg.interaction.kind = InteractionKind::NearestNeighbor;
    cfg.resonance.detuning = 3e-3;
    const auto r = dense_oracle(cfg, 8);
    CHECK(r.max_state_deviation <= 1e-10);
    CHECK(r.max_spectrum_deviation <= 1e-10);
}

TEST_CASE("no kicks and no coupling: the step is the identity") {
    auto cfg = oracle_config();
    cfg.interaction.strength = 0;
    cfg.rotors[0].kick_strength = 0;
    cfg.rotors[1].kick_strength = 0;
    const auto r = dense_oracle(cfg, 3);
    CHECK(r.identity_deviation < 1e-12);
    CHECK(r.max_state_deviation < 1e-12);
}

TEST_CASE("oracle refuses large or non two-rotor systems") {
    auto cfg = oracle_config();
    cfg.basis_size = 32;
    CHECK_THROWS_AS(dense_oracle(cfg, 1), UsageError);
    auto three = reference_three_rotor_config();
    three.basis_size = 8;
    CHECK_THROWS_AS(dense_step_unitary(three), UsageError);
}
