#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qkr/kernels.hpp"
#include "test_util.hpp"

using namespace qkr;

namespace {

std::vector<cplx> phase_table(int l, double k) {
    std::vector<cplx> t(l);
    for (int m = 0; m < l; ++m) t[m] = std::polar(1.0, -k * std::cos(2 * std::numbers::pi * m / l));
    return t;
}

}  // namespace

TEST_CASE("nearest-neighbour bonds") {
    CHECK(kernels::nearest_neighbor_bonds(2) == std::vector<std::pair<int, int>>{{0, 1}});
    CHECK(kernels::nearest_neighbor_bonds(3) == std::vector<std::pair<int, int>>{{0, 1}, {1, 2}, {2, 0}});
    CHECK(kernels::nearest_neighbor_bonds(4).size() == 4);
}

TEST_CASE("interaction kernel: parallel matches serial") {
    for (auto kind : {InteractionKind::AllToAll, InteractionKind::NearestNeighbor, InteractionKind::None})
        for (auto [n, l] : {std::pair{2, 64}, {3, 16}, {4, 8}}) {
            auto a = test::random_state(n, l, 3, Representation::Position);
            auto b = a;
            const auto table = phase_table(l, 0.7);
            kernels::apply_interaction_phases(a.amplitudes(), {n, l}, kind, table);
            kernels::apply_interaction_phases_serial(b.amplitudes(), {n, l}, kind, table);
            CHECK(test::max_abs_diff(a.amplitudes(), b.amplitudes()) < 1e-14);
        }
}

TEST_CASE("interaction kernel evaluates the coupling potential") {
    const int l = 8;
    const double k = 0.9;
    const auto table = phase_table(l, k);
    for (auto kind : {InteractionKind::AllToAll, InteractionKind::NearestNeighbor}) {
        StateVector psi(3, l, Representation::Position);
        for (auto& x : psi.amplitudes()) x = 1;
        kernels::apply_interaction_phases(psi.amplitudes(), {3, l}, kind, table);
        for (int i = 0; i < l; ++i)
            for (int j = 0; j < l; ++j)
                for (int m = 0; m < l; ++m) {
                    const double xi = 2 * std::numbers::pi * i / l, xj = 2 * std::numbers::pi * j / l,
                                 xm = 2 * std::numbers::pi * m / l;
                    double v = 0;
                    if (kind == InteractionKind::AllToAll)
                        v = std::cos(xi + xj + xm);
                    else
                        v = std::cos(xi - xj) + std::cos(xj - xm) + std::cos(xm - xi);
                    CHECK(std::abs(psi[i * l * l + j * l + m] - std::polar(1.0, -k * v)) < 1e-13);
                }
    }
}

TEST_CASE("local phase kernel: parallel matches serial") {
    for (auto [n, l] : {std::pair{2, 64}, {3, 16}}) {
        auto a = test::random_state(n, l, 4, Representation::Position);
        auto b = a;
        std::vector<std::vector<cplx>> phases;
        for (int r = 0; r < n; ++r) phases.push_back(phase_table(l, 1.0 + r));
        kernels::apply_local_phases(a.amplitudes(), {n, l}, phases);
        kernels::apply_local_phases_serial(b.amplitudes(), {n, l}, phases);
        CHECK(test::max_abs_diff(a.amplitudes(), b.amplitudes()) < 1e-14);
    }
}

TEST_CASE("local phases leave the norm unchanged") {
    auto a = test::random_state(2, 32, 8, Representation::Position);
    std::vector<std::vector<cplx>> phases(2, phase_table(32, 2.5));
    kernels::apply_local_phases(a.amplitudes(), {2, 32}, phases);
    CHECK(std::abs(a.norm() - 1.0) < 1e-13);
}
