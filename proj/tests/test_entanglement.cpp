#include <doctest.h>

#include <cmath>
#include <sstream>

#include "qkr/entanglement.hpp"
#include "qkr/oracle.hpp"
#include "test_util.hpp"

using namespace qkr;

namespace {

StateVector bell(int l) {
    StateVector psi(2, l, Representation::Momentum);
    psi[0] = std::sqrt(0.5);                                               // |0,0>
    psi[static_cast<std::size_t>(momentum_slot(1, l)) * l + momentum_slot(1, l)] = std::sqrt(0.5);  // |1,1>
    return psi;
}

SchmidtSpectrum from(std::vector<double> ev) {
    SchmidtSpectrum s;
    s.eigenvalues = std::move(ev);
    return s;
}

}  // namespace

TEST_CASE("Bell-like pair") {
    const auto spec = schmidt_spectrum(bell(8), 3);
    CHECK(spec.kick_index == 3);
    REQUIRE(spec.eigenvalues.size() == 8);
    CHECK(spec.eigenvalues[0] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(spec.eigenvalues[1] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(spec.eigenvalues[2] == 0.0);
    CHECK(von_neumann(spec) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
    CHECK(linear_entropy(spec) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(one_minus_lambda1(spec) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("entropy functionals on fixed spectra") {
    CHECK(von_neumann(from({1, 0, 0, 0})) == 0.0);
    CHECK(linear_entropy(from({1, 0, 0, 0})) == 0.0);
    CHECK(one_minus_lambda1(from({1, 0, 0, 0})) == 0.0);
    for (int l : {2, 16, 512}) {
        const auto u = from(std::vector<double>(l, 1.0 / l));
        CHECK(von_neumann(u) == doctest::Approx(std::log(l)).epsilon(1e-12));
        CHECK(linear_entropy(u) == doctest::Approx(1.0 - 1.0 / l).epsilon(1e-12));
    }
    CHECK(von_neumann(from({0.5, 0.5})) == doctest::Approx(std::log(2.0)));
}

TEST_CASE("SVD spectrum agrees with the dense reduced density matrix") {
    for (auto [n, l] : {std::pair{2, 16}, {2, 64}, {3, 8}}) {
        const auto psi = test::random_state(n, l, 41u + l);
        const auto fast = schmidt_spectrum(psi);
        const auto dense = dense_reduced_spectrum(psi);
        REQUIRE(fast.eigenvalues.size() == dense.size());
        for (std::size_t i = 0; i < dense.size(); ++i) CHECK(std::abs(fast.eigenvalues[i] - dense[i]) < 1e-10);
        CHECK(std::abs(fast.sum() - 1.0) < 1e-9);
        CHECK(std::is_sorted(fast.eigenvalues.rbegin(), fast.eigenvalues.rend()));
    }
}

TEST_CASE("empty rows and columns are compacted away") {
    StateVector psi(2, 32, Representation::Momentum);
    const auto a = test::random_state(2, 4, 5);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) psi[static_cast<std::size_t>(i * 3) * 32 + j * 5] = a[i * 4 + j];
    const auto spec = schmidt_spectrum(psi);
    CHECK(spec.eigenvalues.size() == 32);
    const auto dense = dense_reduced_spectrum(psi);
    for (std::size_t i = 0; i < dense.size(); ++i) CHECK(std::abs(spec.eigenvalues[i] - dense[i]) < 1e-12);
}

TEST_CASE("trace CSV header and round trip") {
    EntanglementTrace trace;
    trace.top_k = 2;
    trace.records.push_back({0, 0.0, 0.0, 1.0, {1.0, 0.0}, 0.0});
    trace.records.push_back({1, 0.1234567890123456789, 0.05, 0.95, {0.97, 0.02}, 16.5});
    std::ostringstream os;
    write_trace_csv(os, trace);
    const std::string text = os.str();
    CHECK(text.substr(0, text.find('\n')) == "t,S_vN,S_lin,purity,lambda_1,lambda_2,E");
    std::istringstream is(text);
    const auto back = read_trace_csv(is);
    REQUIRE(back.records.size() == 2);
    CHECK(back.top_k == 2);
    CHECK(back.records[1].s_vn == trace.records[1].s_vn);
    CHECK(back.records[1].top_lambda == trace.records[1].top_lambda);
    CHECK(back.records[1].energy == 16.5);
}
