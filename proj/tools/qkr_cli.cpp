// qkr: command-line front end for the interacting kicked-rotor engine.
//
// Exit codes: 0 success, 2 usage or invalid configuration, 3 I/O failure,
// 4 runtime failure during a run.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qkr/analysis.hpp"
#include "qkr/config_io.hpp"
#include "qkr/evolution.hpp"
#include "qkr/oracle.hpp"
#include "qkr/runner.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitRuntime = 4;

struct Common {
    std::string config_path;
    std::string preset = "two_rotor";
    std::vector<std::string> overrides;
    std::string out;
    int workers = 1;
    int top_k = -1;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--config", c.config_path, "Config file (key = value, [section] prefixes)");
    cmd->add_option("--preset", c.preset, "Base configuration before the config file and overrides")
        ->check(CLI::IsMember({"two_rotor", "three_rotor", "three_rotor_nn"}));
    cmd->add_option("--set", c.overrides, "Override a dotted key, e.g. --set rotors.1.kick_strength=0")
        ->allow_extra_args(false);
    cmd->add_option("--out", c.out, "Output directory (default: $QKR_OUTPUT_ROOT/<command>)");
    cmd->add_option("--workers", c.workers, "Parallel runs")->check(CLI::PositiveNumber);
    cmd->add_option("--top-k", c.top_k, "Schmidt eigenvalues kept per row")->check(CLI::NonNegativeNumber);
}

qkr::SystemConfig resolve_config(const Common& c) {
    qkr::SystemConfig cfg;
    if (c.preset == "three_rotor") cfg = qkr::reference_three_rotor_config(qkr::InteractionKind::AllToAll);
    else if (c.preset == "three_rotor_nn") cfg = qkr::reference_three_rotor_config(qkr::InteractionKind::NearestNeighbor);
    else cfg = qkr::reference_two_rotor_config();
    if (!c.config_path.empty()) cfg = qkr::load_config(c.config_path, cfg);
    for (const auto& o : c.overrides) qkr::apply_override(cfg, o);
    if (c.top_k >= 0) cfg.observe_top_k = c.top_k;
    qkr::require_valid(cfg);
    return cfg;
}

fs::path output_dir(const Common& c, const std::string& command) {
    if (!c.out.empty()) return c.out;
    const char* root = std::getenv("QKR_OUTPUT_ROOT");
    return fs::path(root && *root ? root : "qkr_runs") / command;
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw qkr::IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
}

void write_json(const fs::path& path, const nlohmann::json& j) {
    std::ofstream out(path);
    if (!out) throw qkr::IoError("cannot write '" + path.string() + "'");
    out << j.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Interacting quantum kicked rotors at resonance"};
    app.require_subcommand(1);

    Common evolve_c, oracle_c, sweep_c, scan_c, compare_c;

    auto* evolve_cmd = app.add_subcommand("evolve", "Evolve one configuration and write its entanglement trace");
    add_common(evolve_cmd, evolve_c);
    bool dump = false;
    std::string tag = "evolve";
    evolve_cmd->add_flag("--dump", dump, "Also write the final state as a binary dump");
    evolve_cmd->add_option("--tag", tag, "File name prefix");

    auto* oracle_cmd = app.add_subcommand("oracle", "Compare the engine against the dense brute-force unitary");
    add_common(oracle_cmd, oracle_c);
    int steps = 5;
    oracle_cmd->add_option("--steps", steps, "Kicks to compare")->check(CLI::NonNegativeNumber);

    auto* sweep_cmd = app.add_subcommand("sweep-coupling", "Crossover time against interaction strength");
    add_common(sweep_cmd, sweep_c);
    std::vector<double> k_list{0.0125, 0.025, 0.05, 0.1, 0.2};
    double window_start = 4;
    sweep_cmd->add_option("--k-list", k_list, "Coupling values")->delimiter(',');
    sweep_cmd->add_option("--window-start", window_start, "Fit window start at the config's coupling");

    auto* scan_cmd = app.add_subcommand("resonance-scan", "Late-time oscillation frequency against detuning");
    add_common(scan_cmd, scan_c);
    std::vector<double> eps_list = qkr::default_resonance_detunings();
    double t_min = -1;
    scan_cmd->add_option("--eps", eps_list, "Detunings (must include 0)")->delimiter(',');
    scan_cmd->add_option("--t-min", t_min, "Late-time cut (default: crossover of the eps = 0 run)");

    auto* compare_cmd = app.add_subcommand("compare-analytic", "Closed-form linear entropy, optionally against a run");
    add_common(compare_cmd, compare_c);
    bool with_numeric = false;
    compare_cmd->add_flag("--numeric", with_numeric, "Also evolve the configuration and add difference columns");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*evolve_cmd) {
            const auto cfg = resolve_config(evolve_c);
            qkr::RunOptions opt;
            opt.out_dir = output_dir(evolve_c, "evolve");
            opt.tag = tag;
            opt.dump_final_state = dump;
            const auto rec = qkr::run_evolve(cfg, opt);
            std::cout << rec.trace_path.string() << '\n';
        } else if (*oracle_cmd) {
            const auto cfg = resolve_config(oracle_c);
            const auto r = qkr::dense_oracle(cfg, steps);
            const nlohmann::json j = {{"steps", r.steps},
                                      {"max_state_deviation", r.max_state_deviation},
                                      {"max_von_neumann_deviation", r.max_von_neumann_deviation},
                                      {"max_linear_entropy_deviation", r.max_linear_entropy_deviation},
                                      {"max_spectrum_deviation", r.max_spectrum_deviation},
                                      {"unitarity_error", r.unitarity_error},
                                      {"identity_deviation", r.identity_deviation},
                                      {"config", qkr::config_to_json(cfg)}};
            const auto dir = output_dir(oracle_c, "oracle");
            ensure_dir(dir);
            write_json(dir / "oracle.json", j);
            std::cout << j.dump(2) << '\n';
        } else if (*sweep_cmd) {
            const auto cfg = resolve_config(sweep_c);
            qkr::SweepOptions opt;
            opt.workers = sweep_c.workers;
            opt.window_start = window_start;
            const auto result = qkr::sweep_coupling(cfg, k_list, opt);
            const auto dir = output_dir(sweep_c, "sweep");
            qkr::write_sweep(dir, cfg, result);
            std::printf("slope %.4f  S* mean %.4f  spread %.4f  survivors %zu\n", result.slope, result.s_star_mean,
                        result.s_star_spread, result.survivors);
        } else if (*scan_cmd) {
            const auto cfg = resolve_config(scan_c);
            qkr::ResonanceScanOptions opt;
            opt.workers = scan_c.workers;
            if (t_min >= 0) opt.t_min = t_min;
            const auto curve = qkr::build_resonance_curve(cfg, eps_list, opt);
            qkr::write_resonance_curve(output_dir(scan_c, "resonance"), cfg, curve);
            for (const auto& s : curve.samples) std::printf("eps %-10g nu %.5f%s\n", s.eps, s.nu, s.peak_found ? "" : "  (no peak)");
            if (curve.q_factor) std::printf("half-width %g  Q %.3g\n", *curve.half_width_eps, *curve.q_factor);
        } else if (*compare_cmd) {
            const auto cfg = resolve_config(compare_c);
            const auto dir = output_dir(compare_c, "compare");
            ensure_dir(dir);
            std::optional<qkr::EntanglementTrace> trace;
            if (with_numeric) trace = qkr::evolve(cfg);
            const auto path = dir / "compare_analytic.csv";
            std::ofstream out(path);
            if (!out) throw qkr::IoError("cannot write '" + path.string() + "'");
            qkr::write_analytic_csv(out, cfg, trace ? &*trace : nullptr);
            std::cout << path.string() << '\n';
        }
    } catch (const qkr::IoError& e) {
        std::cerr << "qkr: " << e.what() << '\n';
        return kExitIo;
    } catch (const qkr::UsageError& e) {
        std::cerr << "qkr: " << e.what() << '\n';
        return kExitUsage;
    } catch (const qkr::DomainError& e) {
        std::cerr << "qkr: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "qkr: " << e.what() << '\n';
        return kExitRuntime;
    }
    return 0;
}
