#include "qkr/config_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <sstream>

namespace qkr {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

template <class T>
T parse_number(const std::string& key, const std::string& text) {
    T value{};
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end)
        throw ConfigError("config key '" + key + "': cannot parse '" + text + "' as a number");
    return value;
}

std::string show(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void set_rotor_value(SystemConfig& config, const std::string& key, const std::string& rest,
                     const std::string& value) {
    const auto dot = rest.find('.');
    if (dot == std::string::npos) throw ConfigError("unknown config key '" + key + "'");
    const int index = parse_number<int>(key, rest.substr(0, dot));
    if (index < 1 || index > 64) throw ConfigError("config key '" + key + "': rotor index out of range");
    const std::string field = rest.substr(dot + 1);
    if (static_cast<int>(config.rotors.size()) < index) config.rotors.resize(index, RotorParams{0, 0.0, 0.0});
    auto& rot = config.rotors[index - 1];
    if (field == "tau") rot.tau = parse_number<int>(key, value);
    else if (field == "kick_strength") rot.kick_strength = parse_number<double>(key, value);
    else if (field == "kick_phase") rot.kick_phase = parse_number<double>(key, value);
    else throw ConfigError("unknown config key '" + key + "'");
}

}  // namespace

void set_config_value(SystemConfig& config, const std::string& key, const std::string& value) {
    if (key == "basis_size") config.basis_size = parse_number<int>(key, value);
    else if (key == "horizon") config.horizon = parse_number<int>(key, value);
    else if (key == "observe_top_k") config.observe_top_k = parse_number<int>(key, value);
    else if (key == "memory_budget") config.memory_budget = parse_number<std::uint64_t>(key, value);
    else if (key == "wrap_guard") config.wrap_guard = parse_wrap_guard(value);
    else if (key == "interaction.kind") config.interaction.kind = parse_interaction_kind(value);
    else if (key == "interaction.strength") config.interaction.strength = parse_number<double>(key, value);
    else if (key == "resonance.period") config.resonance.period = parse_number<double>(key, value);
    else if (key == "resonance.r") config.resonance.r = parse_number<int>(key, value);
    else if (key == "resonance.s") config.resonance.s = parse_number<int>(key, value);
    else if (key == "resonance.detuning") config.resonance.detuning = parse_number<double>(key, value);
    else if (key == "rotors.count") {
        const int n = parse_number<int>(key, value);
        if (n < 0 || n > 64) throw ConfigError("rotors.count out of range");
        config.rotors.resize(n, RotorParams{0, 0.0, 0.0});
    } else if (key.starts_with("rotors.")) {
        set_rotor_value(config, key, key.substr(7), value);
    } else {
        throw ConfigError("unknown config key '" + key + "'");
    }
}

void apply_override(SystemConfig& config, std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos)
        throw ConfigError("override '" + std::string(assignment) + "' is not of the form key=value");
    set_config_value(config, trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

SystemConfig parse_config(std::istream& is, const SystemConfig& base) {
    SystemConfig config = base;
    std::string prefix;
    std::string raw;
    int line_no = 0;
    while (std::getline(is, raw)) {
        ++line_no;
        std::string_view view(raw);
        if (const auto c = view.find_first_of("#;"); c != std::string_view::npos) view = view.substr(0, c);
        const std::string line = trim(view);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError("line " + std::to_string(line_no) + ": unterminated section");
            prefix = trim(std::string_view(line).substr(1, line.size() - 2));
            if (!prefix.empty()) prefix += '.';
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        try {
            set_config_value(config, prefix + trim(std::string_view(line).substr(0, eq)),
                             trim(std::string_view(line).substr(eq + 1)));
        } catch (const UsageError& e) {
            throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return config;
}

SystemConfig load_config(const std::filesystem::path& path, const SystemConfig& base) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path.string() + "'");
    return parse_config(in, base);
}

std::string format_config(const SystemConfig& config) {
    std::ostringstream os;
    os << "basis_size = " << config.basis_size << '\n'
       << "horizon = " << config.horizon << '\n'
       << "observe_top_k = " << config.observe_top_k << '\n'
       << "memory_budget = " << config.memory_budget << '\n'
       << "wrap_guard = " << to_string(config.wrap_guard) << '\n'
       << "\n[interaction]\n"
       << "kind = " << to_string(config.interaction.kind) << '\n'
       << "strength = " << show(config.interaction.strength) << '\n'
       << "\n[resonance]\n"
       << "period = " << show(config.resonance.period) << '\n'
       << "r = " << config.resonance.r << '\n'
       << "s = " << config.resonance.s << '\n'
       << "detuning = " << show(config.resonance.detuning) << '\n';
    for (std::size_t i = 0; i < config.rotors.size(); ++i) {
        const auto& rot = config.rotors[i];
        os << "\n[rotors." << i + 1 << "]\n"
           << "tau = " << rot.tau << '\n'
           << "kick_strength = " << show(rot.kick_strength) << '\n'
           << "kick_phase = " << show(rot.kick_phase) << '\n';
    }
    return os.str();
}

namespace {

nlohmann::json planck_or_null(const ResonanceSpec& res) {
    try {
        return effective_planck(res);
    } catch (const DomainError&) {
        return nullptr;
    }
}

}  // namespace

nlohmann::json config_to_json(const SystemConfig& config) {
    nlohmann::json rotors = nlohmann::json::array();
    for (const auto& rot : config.rotors)
        rotors.push_back({{"tau", rot.tau}, {"kick_strength", rot.kick_strength}, {"kick_phase", rot.kick_phase}});
    return {
        {"rotors", rotors},
        {"interaction", {{"kind", to_string(config.interaction.kind)}, {"strength", config.interaction.strength}}},
        {"resonance",
         {{"period", config.resonance.period},
          {"r", config.resonance.r},
          {"s", config.resonance.s},
          {"detuning", config.resonance.detuning},
          {"effective_planck", planck_or_null(config.resonance)}}},
        {"basis_size", config.basis_size},
        {"horizon", config.horizon},
        {"observe_top_k", config.observe_top_k},
        {"memory_budget", config.memory_budget},
        {"wrap_guard", to_string(config.wrap_guard)},
    };
}

}  // namespace qkr
