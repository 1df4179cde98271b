#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

#include "qkr/model.hpp"

namespace qkr {

class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public UsageError {
  public:
    using UsageError::UsageError;
};

// Config text format: one `key = value` per line, `#` or `;` starts a
// comment, and a `[prefix]` line prepends `prefix.` to the keys below it.
// Every field has a dotted key:
//
//   basis_size  horizon  observe_top_k  memory_budget  wrap_guard
//   interaction.kind  interaction.strength
//   resonance.period  resonance.r  resonance.s  resonance.detuning
//   rotors.count  rotors.<i>.tau  rotors.<i>.kick_strength  rotors.<i>.kick_phase
//
// Rotor indices start at 1. Naming a rotor past the current count appends
// rotors with tau = 0, which fails validation until tau is set.

SystemConfig parse_config(std::istream& is, const SystemConfig& base = {});
SystemConfig load_config(const std::filesystem::path& path, const SystemConfig& base = {});

void set_config_value(SystemConfig& config, const std::string& key, const std::string& value);
/// Applies a `key=value` override.
void apply_override(SystemConfig& config, std::string_view assignment);

/// Text that parse_config reads back to the same config.
std::string format_config(const SystemConfig& config);
nlohmann::json config_to_json(const SystemConfig& config);

}  // namespace qkr
