#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
    const std::string cmd = std::string(QKR_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path fresh(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("qkr_cli_" + name);
    fs::remove_all(dir);
    return dir;
}

}  // namespace

TEST_CASE("cli: evolve with horizon 0 writes one data row") {
    const auto dir = fresh("evolve");
    CHECK(run("evolve --set basis_size=32 --set horizon=0 --out " + dir.string()) == 0);
    std::ifstream in(dir / "evolve_trace.csv");
    std::string header, row, extra;
    std::getline(in, header);
    std::getline(in, row);
    CHECK(header == "t,S_vN,S_lin,purity,lambda_1,lambda_2,lambda_3,lambda_4,lambda_5,lambda_6,E");
    CHECK(row.rfind("0,", 0) == 0);
    CHECK_FALSE(std::getline(in, extra));
    CHECK(fs::exists(dir / "evolve_meta.json"));
}

TEST_CASE("cli: exit codes") {
    CHECK(run("evolve --config /nonexistent/file.cfg") == 3);
    CHECK(run("evolve --set basis_size=7 --out " + fresh("bad").string()) == 2);
    CHECK(run("evolve --set no.such.key=1") == 2);
    CHECK(run("frobnicate") == 2);
    CHECK(run("sweep-coupling --k-list 0.05") == 2);
    CHECK(run("resonance-scan --eps 1e-5,1e-4") == 2);
    CHECK(run("oracle --set basis_size=64") == 2);
    CHECK(run("--help") == 0);
}

TEST_CASE("cli: config file plus overrides, oracle, and analytic overlay") {
    const auto dir = fresh("cfg");
    fs::create_directories(dir);
    {
        std::ofstream cfg(dir / "small.cfg");
        cfg << "basis_size = 8\n[interaction]\nstrength = 0.05\n";
    }
    CHECK(run("oracle --config " + (dir / "small.cfg").string() + " --out " + (dir / "o").string()) == 0);
    CHECK(fs::exists(dir / "o" / "oracle.json"));
    CHECK(run("compare-analytic --set horizon=10 --out " + (dir / "c").string()) == 0);
    CHECK(fs::exists(dir / "c" / "compare_analytic.csv"));
}

TEST_CASE("cli: output root from the environment") {
    const auto root = fresh("root");
    ::setenv("QKR_OUTPUT_ROOT", root.c_str(), 1);
    CHECK(run("evolve --set basis_size=16 --set horizon=2") == 0);
    ::unsetenv("QKR_OUTPUT_ROOT");
    CHECK(fs::exists(root / "evolve" / "evolve_trace.csv"));
}
