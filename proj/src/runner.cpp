#include "qkr/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "qkr/analytics.hpp"
#include "qkr/config_io.hpp"
#include "qkr/evolution.hpp"
#include "qkr/worker_pool.hpp"

namespace qkr {

namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const fs::path& path, std::ios::openmode mode = std::ios::out) {
    std::ofstream out(path, mode);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    return out;
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
}

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

nlohmann::json RunRecord::to_json() const {
    return {{"tag", tag},         {"config", config},   {"trace_path", trace_path.string()},
            {"fits", fits},       {"wall_seconds", wall_seconds},
            {"version", version}, {"status", status}};
}

nlohmann::json trace_fits(const EntanglementTrace& trace, std::optional<Window> window) {
    nlohmann::json fits = nlohmann::json::object();
    if (trace.wrap_kick) fits["wrap_kick"] = *trace.wrap_kick;
    try {
        const auto cross = detect_crossover(trace, window);
        fits["crossover"] = {{"status", cross.found() ? "found" : "no_crossover"},
                             {"t_star", cross.fit.t_star},
                             {"mu_segment", cross.fit.mu},
                             {"log_a", cross.fit.late.a},
                             {"log_b", cross.fit.late.b},
                             {"residual", cross.fit.residual},
                             {"window", {cross.fit.window.lo, cross.fit.window.hi}}};
        if (cross.found()) {
            const Window early = early_window(cross.fit.t_star);
            const auto t = trace.times();
            try {
                const auto mu = fit_power_law(trace, early);
                fits["early_growth"] = {{"window", {early.lo, early.hi}},
                                        {"mu", mu.exponent},
                                        {"residual", mu.residual}};
                const auto onset = trace.one_minus_lambda1_series();
                std::vector<double> tw, yw;
                for (std::size_t i = 0; i < t.size(); ++i)
                    if (t[i] >= early.lo && t[i] <= early.hi) {
                        tw.push_back(t[i]);
                        yw.push_back(onset[i]);
                    }
                const auto q = fit_power_law(tw, yw);
                fits["one_minus_lambda1"] = {{"window", {early.lo, early.hi}}, {"exponent", q.exponent}};
            } catch (const UsageError&) {
            }
            const auto s = trace.von_neumann_series();
            const auto it = std::find(t.begin(), t.end(), cross.fit.t_star);
            if (it != t.end()) fits["s_star"] = s[static_cast<std::size_t>(it - t.begin())];
        }
    } catch (const UsageError&) {
    }
    return fits;
}

void append_run_record(const fs::path& out_dir, const RunRecord& record) {
    auto out = open_out(out_dir / "runs.jsonl", std::ios::out | std::ios::app);
    out << record.to_json().dump() << '\n';
}

RunRecord persist_trace(const fs::path& out_dir, const std::string& tag, const SystemConfig& config,
                        const EntanglementTrace& trace, double wall_seconds, std::optional<Window> fit_window) {
    ensure_dir(out_dir);
    RunRecord rec;
    rec.tag = tag;
    rec.config = config_to_json(config);
    rec.trace_path = out_dir / (tag + "_trace.csv");
    rec.fits = trace_fits(trace, fit_window);
    rec.wall_seconds = wall_seconds;
    {
        auto out = open_out(rec.trace_path);
        write_trace_csv(out, trace);
    }
    {
        auto out = open_out(out_dir / (tag + "_meta.json"));
        out << rec.to_json().dump(2) << '\n';
    }
    append_run_record(out_dir, rec);
    return rec;
}

RunRecord run_evolve(const SystemConfig& config, const RunOptions& options) {
    require_valid(config);
    ensure_dir(options.out_dir);
    const auto start = std::chrono::steady_clock::now();

    EvolveOptions evo;
    std::optional<StateVector> final_state;
    if (options.dump_final_state) {
        evo.observers.push_back([&](long t, const StateVector& psi) {
            if (t == config.horizon) final_state = psi;
        });
    }
    const auto trace = evolve(config, evo);
    auto rec = persist_trace(options.out_dir, options.tag, config, trace, seconds_since(start));
    if (final_state) {
        auto out = open_out(options.out_dir / (options.tag + "_state.bin"), std::ios::out | std::ios::binary);
        write_dump(out, *final_state, config.horizon);
    }
    return rec;
}

ScanResult sweep_coupling(const SystemConfig& config, std::span<const double> couplings_in,
                          const SweepOptions& options) {
    if (couplings_in.size() < 4) throw UsageError("coupling sweep: needs at least 4 coupling values");
    std::vector<double> couplings(couplings_in.begin(), couplings_in.end());
    std::sort(couplings.begin(), couplings.end());
    for (double k : couplings)
        if (!(k > 0)) throw UsageError("coupling sweep: couplings must be positive");
    require_valid(config);

    const double k_ref = config.interaction.strength > 0 ? config.interaction.strength : couplings.front();
    ScanResult result;
    result.entries.resize(couplings.size());
    for (std::size_t i = 0; i < couplings.size(); ++i) {
        auto& e = result.entries[i];
        const double scale = k_ref / couplings[i];
        e.coupling = couplings[i];
        e.horizon = static_cast<int>(std::ceil(config.horizon * scale));
        e.window = {std::max(1.0, std::round(options.window_start * scale)), static_cast<double>(e.horizon)};
    }

    auto errors = run_indexed(couplings.size(), options.workers, [&](std::size_t i) {
        auto& e = result.entries[i];
        SystemConfig run = config;
        run.interaction.strength = e.coupling;
        run.horizon = e.horizon;
        e.trace = evolve(run);
        const auto cross = detect_crossover(e.trace, e.window);
        if (!cross.found()) {
            e.error = "no crossover";
            return;
        }
        e.t_star = cross.fit.t_star;
        e.s_star = e.trace.records.at(static_cast<std::size_t>(e.t_star)).s_vn;
        try {
            e.mu = fit_power_law(e.trace, early_window(e.t_star)).exponent;
        } catch (const UsageError&) {
        }
        e.ok = true;
    });
    for (std::size_t i = 0; i < errors.size(); ++i) {
        if (!errors[i]) continue;
        try {
            std::rethrow_exception(errors[i]);
        } catch (const std::exception& ex) {
            result.entries[i].error = ex.what();
        }
    }

    std::vector<std::pair<double, double>> pairs;
    std::vector<double> s_stars;
    for (const auto& e : result.entries)
        if (e.ok) {
            pairs.emplace_back(e.coupling, e.t_star);
            s_stars.push_back(e.s_star);
        }
    result.survivors = pairs.size();
    if (result.survivors < 4)
        throw std::runtime_error("coupling sweep: only " + std::to_string(result.survivors) +
                                 " runs produced a crossover (need 4)");
    result.slope = scaling_exponent(pairs);
    result.s_star_mean = std::accumulate(s_stars.begin(), s_stars.end(), 0.0) / static_cast<double>(s_stars.size());
    const auto [lo, hi] = std::minmax_element(s_stars.begin(), s_stars.end());
    result.s_star_spread = (*hi - *lo) / result.s_star_mean;
    return result;
}

void write_sweep(const fs::path& out_dir, const SystemConfig& config, const ScanResult& result) {
    ensure_dir(out_dir);
    nlohmann::json runs = nlohmann::json::array();
    {
        auto csv = open_out(out_dir / "sweep.csv");
        csv << "K,t_star,S_star,mu,horizon,status\n";
        for (const auto& e : result.entries) {
            csv << num(e.coupling) << ',' << num(e.t_star) << ',' << num(e.s_star) << ','
                << (e.mu ? num(*e.mu) : std::string{}) << ',' << e.horizon << ','
                << (e.ok ? "ok" : e.error) << '\n';
            nlohmann::json j = {{"K", e.coupling},           {"t_star", e.t_star}, {"S_star", e.s_star},
                                {"horizon", e.horizon},      {"window", {e.window.lo, e.window.hi}},
                                {"status", e.ok ? "ok" : e.error}};
            if (e.mu) j["mu"] = *e.mu;
            runs.push_back(j);
        }
    }
    for (const auto& e : result.entries) {
        if (e.trace.records.empty()) continue;
        SystemConfig run = config;
        run.interaction.strength = e.coupling;
        run.horizon = e.horizon;
        persist_trace(out_dir, "sweep_K" + num(e.coupling), run, e.trace, 0.0, e.window);
    }
    auto out = open_out(out_dir / "sweep.json");
    out << nlohmann::json{{"runs", runs},
                          {"slope_ln_tstar_vs_ln_K", result.slope},
                          {"S_star_mean", result.s_star_mean},
                          {"S_star_relative_spread", result.s_star_spread},
                          {"survivors", result.survivors},
                          {"version", kArtifactVersion}}
               .dump(2)
        << '\n';
}

void write_resonance_curve(const fs::path& out_dir, const SystemConfig& config, const ResonanceCurve& curve) {
    ensure_dir(out_dir);
    nlohmann::json samples = nlohmann::json::array();
    {
        auto csv = open_out(out_dir / "resonance_curve.csv");
        csv << "eps,nu,peak_found\n";
        for (const auto& s : curve.samples) {
            csv << num(s.eps) << ',' << num(s.nu) << ',' << (s.peak_found ? 1 : 0) << '\n';
            samples.push_back({{"eps", s.eps}, {"nu", s.nu}, {"peak_found", s.peak_found}});
        }
    }
    for (std::size_t i = 0; i < curve.traces.size() && i < curve.samples.size(); ++i) {
        SystemConfig run = config;
        run.resonance.detuning = curve.samples[i].eps;
        persist_trace(out_dir, "resonance_eps" + num(curve.samples[i].eps), run, curve.traces[i], 0.0);
    }
    nlohmann::json j = {{"samples", samples},
                        {"t_min", curve.t_min},
                        {"peak_nu", curve.peak_nu},
                        {"half_width_eps", curve.half_width_eps ? nlohmann::json(*curve.half_width_eps) : nullptr},
                        {"q_factor", curve.q_factor ? nlohmann::json(*curve.q_factor) : nullptr},
                        {"version", kArtifactVersion}};
    auto out = open_out(out_dir / "resonance.json");
    out << j.dump(2) << '\n';
}

void write_analytic_csv(std::ostream& os, const SystemConfig& config, const EntanglementTrace* numeric) {
    const double hbar = effective_planck(config.resonance);
    const double k = config.interaction.effective_strength();
    os << "t,S_lin_analytic";
    if (numeric) os << ",S_lin_numeric,abs_diff";
    os << '\n';
    for (int t = 0; t <= config.horizon; ++t) {
        const double a = analytic_linear_entropy(k, t, hbar);
        os << t << ',' << num(a);
        if (numeric) {
            const double s = numeric->records.at(static_cast<std::size_t>(t)).s_lin;
            os << ',' << num(s) << ',' << num(std::abs(s - a));
        }
        os << '\n';
    }
}

std::vector<double> default_resonance_detunings() { return {0.0, 2e-5, 5e-5, 1e-4, 2e-4, 5e-4}; }

}  // namespace qkr
