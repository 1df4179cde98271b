#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include "qkr/config_io.hpp"
#include "qkr/runner.hpp"

using namespace qkr;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("qkr_test_" + name);
    fs::remove_all(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

SystemConfig small() {
    auto cfg = reference_two_rotor_config();
    cfg.basis_size = 32;
    cfg.horizon = 20;
    return cfg;
}

}  // namespace

TEST_CASE("evolve run writes trace, metadata, and a run record") {
    const auto dir = fresh_dir("evolve");
    RunOptions opt;
    opt.out_dir = dir;
    opt.tag = "a";
    opt.dump_final_state = true;
    const auto rec = run_evolve(small(), opt);
    CHECK(fs::exists(dir / "a_trace.csv"));
    CHECK(fs::exists(dir / "a_meta.json"));
    CHECK(fs::exists(dir / "a_state.bin"));
    CHECK(rec.trace_path == dir / "a_trace.csv");
    CHECK(rec.status == "ok");

    const auto csv = slurp(dir / "a_trace.csv");
    CHECK(csv.substr(0, csv.find('\n')) == "t,S_vN,S_lin,purity,lambda_1,lambda_2,lambda_3,lambda_4,lambda_5,lambda_6,E");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 22);

    opt.tag = "b";
    run_evolve(small(), opt);
    std::ifstream log(dir / "runs.jsonl");
    std::string line;
    std::vector<std::string> traces;
    while (std::getline(log, line)) traces.push_back(nlohmann::json::parse(line)["trace_path"]);
    CHECK(traces == std::vector<std::string>{(dir / "a_trace.csv").string(), (dir / "b_trace.csv").string()});
}

TEST_CASE("horizon zero gives a single data row") {
    const auto dir = fresh_dir("zero");
    auto cfg = small();
    cfg.horizon = 0;
    RunOptions opt;
    opt.out_dir = dir;
    run_evolve(cfg, opt);
    const auto csv = slurp(dir / "evolve_trace.csv");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
}

TEST_CASE("reruns are byte-identical") {
    const auto d1 = fresh_dir("rerun1");
    const auto d2 = fresh_dir("rerun2");
    auto cfg = small();
    cfg.basis_size = 64;
    cfg.horizon = 60;
    cfg.resonance.detuning = 1e-4;
    RunOptions opt;
    opt.out_dir = d1;
    run_evolve(cfg, opt);
    opt.out_dir = d2;
    run_evolve(cfg, opt);
    CHECK(slurp(d1 / "evolve_trace.csv") == slurp(d2 / "evolve_trace.csv"));
}

TEST_CASE("invalid config is rejected before anything is written") {
    const auto dir = fresh_dir("invalid");
    auto cfg = small();
    cfg.rotors[1].tau = 1;
    RunOptions opt;
    opt.out_dir = dir;
    CHECK_THROWS_AS(run_evolve(cfg, opt), UsageError);
    CHECK_FALSE(fs::exists(dir / "evolve_trace.csv"));
}

TEST_CASE("coupling sweep needs at least four values") {
    const std::vector<double> one{0.05};
    CHECK_THROWS_AS(sweep_coupling(small(), one), UsageError);
    const std::vector<double> three{0.05, 0.1, 0.2};
    CHECK_THROWS_AS(sweep_coupling(small(), three), UsageError);
    const std::vector<double> negative{-0.1, 0.05, 0.1, 0.2};
    CHECK_THROWS_AS(sweep_coupling(small(), negative), UsageError);
}

TEST_CASE("sweep results do not depend on worker count") {
    auto cfg = small();
    cfg.basis_size = 64;
    cfg.horizon = 300;
    cfg.rotors[0].kick_strength = 0;
    cfg.rotors[1].kick_strength = 0;
    const std::vector<double> ks{0.1, 0.0125, 0.05, 0.025};
    SweepOptions one;
    SweepOptions four;
    four.workers = 4;
    const auto a = sweep_coupling(cfg, ks, one);
    const auto b = sweep_coupling(cfg, ks, four);
    REQUIRE(a.entries.size() == 4);
    CHECK(a.entries.front().coupling == 0.0125);
    CHECK(a.entries.front().horizon == 1200);
    CHECK(a.entries.back().horizon == 150);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(a.entries[i].t_star == b.entries[i].t_star);
        CHECK(a.entries[i].s_star == b.entries[i].s_star);
    }
    CHECK(a.slope == b.slope);
    CHECK(a.slope < 0);

    const auto dir = fresh_dir("sweep");
    write_sweep(dir, cfg, a);
    const auto csv = slurp(dir / "sweep.csv");
    CHECK(csv.substr(0, csv.find('\n')) == "K,t_star,S_star,mu,horizon,status");
    const auto j = nlohmann::json::parse(slurp(dir / "sweep.json"));
    CHECK(j["runs"].size() == 4);
}

TEST_CASE("analytic comparison CSV") {
    auto cfg = small();
    cfg.horizon = 3;
    std::ostringstream os;
    write_analytic_csv(os, cfg);
    std::istringstream is(os.str());
    std::string header, first;
    std::getline(is, header);
    std::getline(is, first);
    CHECK(header == "t,S_lin_analytic");
    CHECK(first == "0,0");
    EntanglementTrace trace;
    for (int t = 0; t <= 3; ++t) trace.records.push_back({t, 0, 0.001 * t, 1, {}, 0});
    std::ostringstream with;
    write_analytic_csv(with, cfg, &trace);
    CHECK(with.str().substr(0, with.str().find('\n')) == "t,S_lin_analytic,S_lin_numeric,abs_diff");
}
