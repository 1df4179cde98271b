#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "qkr/analysis.hpp"
#include "qkr/entanglement.hpp"
#include "qkr/model.hpp"

namespace qkr {

inline constexpr const char* kArtifactVersion = "0.1.0";

/// Metadata for one emitted trace. Records are appended, one JSON object per
/// line, to `runs.jsonl` in the output directory.
struct RunRecord {
    std::string tag;
    nlohmann::json config;
    std::filesystem::path trace_path;
    nlohmann::json fits;
    double wall_seconds = 0;
    std::string version = kArtifactVersion;
    std::string status = "ok";

    nlohmann::json to_json() const;
};

/// Crossover, early exponent, and quadratic-onset fits where the trace is
/// long enough; absent entries are omitted.
nlohmann::json trace_fits(const EntanglementTrace& trace, std::optional<Window> window = std::nullopt);

void append_run_record(const std::filesystem::path& out_dir, const RunRecord& record);

/// Writes `<tag>_trace.csv` and `<tag>_meta.json` and appends to runs.jsonl.
RunRecord persist_trace(const std::filesystem::path& out_dir, const std::string& tag, const SystemConfig& config,
                        const EntanglementTrace& trace, double wall_seconds,
                        std::optional<Window> fit_window = std::nullopt);

struct RunOptions {
    std::filesystem::path out_dir = ".";
    std::string tag = "evolve";
    bool dump_final_state = false;  // also writes <tag>_state.bin
};

RunRecord run_evolve(const SystemConfig& config, const RunOptions& options);

struct SweepEntry {
    double coupling = 0;
    int horizon = 0;
    Window window;
    bool ok = false;
    std::string error;
    double t_star = 0;
    double s_star = 0;
    std::optional<double> mu;  // early window [3, t*/2], when it has >= 5 points
    EntanglementTrace trace;
};

struct ScanResult {
    std::vector<SweepEntry> entries;  // ascending coupling
    double slope = 0;                 // d ln t* / d ln K
    double s_star_mean = 0;
    double s_star_spread = 0;         // (max - min) / mean of S_vN(t*)
    std::size_t survivors = 0;
};

struct SweepOptions {
    int workers = 1;
    // Fit window at the reference coupling (the config's); every run scales
    // its window and horizon by K_ref / K.
    double window_start = 4;
};

/// Needs >= 4 couplings. Failed or crossover-free runs are recorded and
/// skipped; aggregation needs >= 4 survivors.
ScanResult sweep_coupling(const SystemConfig& config, std::span<const double> couplings,
                          const SweepOptions& options = {});

void write_sweep(const std::filesystem::path& out_dir, const SystemConfig& config, const ScanResult& result);
void write_resonance_curve(const std::filesystem::path& out_dir, const SystemConfig& config,
                           const ResonanceCurve& curve);

/// t, S_lin_analytic rows for t = 0..horizon; with a numeric trace, adds
/// S_lin_numeric and abs_diff.
void write_analytic_csv(std::ostream& os, const SystemConfig& config, const EntanglementTrace* numeric = nullptr);

std::vector<double> default_resonance_detunings();

}  // namespace qkr
