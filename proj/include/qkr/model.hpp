#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace qkr {

/// Raised when a numerical argument lies outside the domain of a function.
class DomainError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// Raised when an operation is called in a state or shape it does not support.
class UsageError : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

struct RotorParams {
    int tau = 1;               // inverse mass, integer
    double kick_strength = 0;  // K_i
    double kick_phase = 0;     // Phi_i, radians
};

enum class InteractionKind { AllToAll, NearestNeighbor, None };

struct InteractionSpec {
    InteractionKind kind = InteractionKind::AllToAll;
    double strength = 0;

    /// Coupling that actually enters the dynamics (zero for kind None).
    double effective_strength() const {
        return kind == InteractionKind::None ? 0.0 : strength;
    }
};

struct ResonanceSpec {
    double period = 12.0;
    int r = 1;
    int s = 1;
    double detuning = 0.0;

    bool exact() const { return detuning == 0.0; }
};

/// What to do when probability reaches the edge of the momentum grid.
enum class WrapGuard { Error, Flag, Off };

struct SystemConfig {
    std::vector<RotorParams> rotors;
    InteractionSpec interaction;
    ResonanceSpec resonance;
    int basis_size = 512;
    int horizon = 1000;
    int observe_top_k = 6;
    std::uint64_t memory_budget = std::uint64_t{1} << 26;  // amplitudes
    WrapGuard wrap_guard = WrapGuard::Flag;

    int rotor_count() const { return static_cast<int>(rotors.size()); }

    /// L^N, or 0 if it overflows 64 bits.
    std::uint64_t dimension() const;
};

struct ValidationReport {
    std::vector<std::string> failures;

    bool ok() const { return failures.empty(); }
    std::string to_string() const;
};

ValidationReport validate(const SystemConfig& config);

/// Throws UsageError carrying the report if the config does not validate.
void require_valid(const SystemConfig& config);

/// hbar'_s = 4 pi r / (s (T + eps)).
double effective_planck(const ResonanceSpec& res);

/// Free-evolution phase of momentum number n for rotor tau, expressed as a
/// fraction of a full turn in [0, 1). Exact (integer arithmetic) at eps = 0.
double free_phase_turns(const ResonanceSpec& res, int tau, std::int64_t n);

const char* to_string(InteractionKind kind);
const char* to_string(WrapGuard guard);
InteractionKind parse_interaction_kind(const std::string& text);
WrapGuard parse_wrap_guard(const std::string& text);

/// Two rotors: tau = (1, 2), K_i = (4, 5), Phi_i = (0.1, 0.15), K = 0.05,
/// T = 12, L = 2^10.
SystemConfig reference_two_rotor_config();

/// Adds a third rotor (tau = 3, K_3 = 5.5, Phi_3 = 0.01) with L = 2^6.
SystemConfig reference_three_rotor_config(InteractionKind kind = InteractionKind::AllToAll);

}  // namespace qkr
