#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "qkr/entanglement.hpp"
#include "qkr/evolution.hpp"
#include "qkr/kernels.hpp"

namespace {

using qkr::cplx;

qkr::StateVector random_state(int rotors, int basis) {
    qkr::StateVector s(rotors, basis, qkr::Representation::Position);
    std::size_t i = 0;
    for (auto& a : s.amplitudes()) {
        ++i;
        a = cplx(std::sin(0.37 * i), std::cos(1.13 * i));
    }
    return s;
}

std::vector<cplx> unit_table(int basis) {
    std::vector<cplx> t(basis);
    for (int m = 0; m < basis; ++m) t[m] = std::polar(1.0, 0.3 * std::cos(2 * std::numbers::pi * m / basis));
    return t;
}

template <bool Serial>
void BM_Interaction(benchmark::State& st) {
    const int n = static_cast<int>(st.range(0));
    const int l = static_cast<int>(st.range(1));
    const auto kind = st.range(2) ? qkr::InteractionKind::NearestNeighbor : qkr::InteractionKind::AllToAll;
    auto psi = random_state(n, l);
    const auto table = unit_table(l);
    for (auto _ : st) {
        if constexpr (Serial)
            qkr::kernels::apply_interaction_phases_serial(psi.amplitudes(), {n, l}, kind, table);
        else
            qkr::kernels::apply_interaction_phases(psi.amplitudes(), {n, l}, kind, table);
        benchmark::DoNotOptimize(psi.amplitudes().data());
    }
    st.SetItemsProcessed(st.iterations() * static_cast<long>(psi.size()));
}

template <bool Serial>
void BM_LocalPhases(benchmark::State& st) {
    const int n = static_cast<int>(st.range(0));
    const int l = static_cast<int>(st.range(1));
    auto psi = random_state(n, l);
    std::vector<std::vector<cplx>> phases(n, unit_table(l));
    for (auto _ : st) {
        if constexpr (Serial)
            qkr::kernels::apply_local_phases_serial(psi.amplitudes(), {n, l}, phases);
        else
            qkr::kernels::apply_local_phases(psi.amplitudes(), {n, l}, phases);
        benchmark::DoNotOptimize(psi.amplitudes().data());
    }
    st.SetItemsProcessed(st.iterations() * static_cast<long>(psi.size()));
}

void BM_DftDirect(benchmark::State& st) {
    const int n = static_cast<int>(st.range(0));
    const int l = static_cast<int>(st.range(1));
    auto psi = random_state(n, l);
    for (auto _ : st) {
        for (int axis = 0; axis < n; ++axis) qkr::kernels::axis_dft_serial(psi.amplitudes(), {n, l}, axis, +1);
        benchmark::DoNotOptimize(psi.amplitudes().data());
    }
}

void BM_DftFftw(benchmark::State& st) {
    const int n = static_cast<int>(st.range(0));
    const int l = static_cast<int>(st.range(1));
    auto psi = random_state(n, l);
    psi.set_representation(qkr::Representation::Momentum);
    const qkr::SpectralTransform fft(n, l);
    for (auto _ : st) {
        fft.apply(psi, qkr::DftDirection::MomentumToPosition);
        psi.set_representation(qkr::Representation::Momentum);
        benchmark::DoNotOptimize(psi.amplitudes().data());
    }
}

void BM_Step(benchmark::State& st) {
    auto cfg = st.range(0) == 2 ? qkr::reference_two_rotor_config() : qkr::reference_three_rotor_config();
    cfg.basis_size = static_cast<int>(st.range(1));
    const qkr::Propagator prop(cfg);
    auto psi = qkr::zero_momentum_product_state(cfg);
    for (auto _ : st) prop.step(psi);
}

void BM_Schmidt(benchmark::State& st) {
    const int l = static_cast<int>(st.range(0));
    auto psi = random_state(2, l);
    psi.set_representation(qkr::Representation::Momentum);
    for (auto _ : st) benchmark::DoNotOptimize(qkr::schmidt_spectrum(psi, 0));
}

}  // namespace

BENCHMARK(BM_Interaction<true>)->Args({2, 512, 0})->Args({3, 64, 0})->Args({3, 64, 1})->Name("interaction/serial");
BENCHMARK(BM_Interaction<false>)->Args({2, 512, 0})->Args({3, 64, 0})->Args({3, 64, 1})->Name("interaction/omp");
BENCHMARK(BM_LocalPhases<true>)->Args({2, 512})->Args({3, 64})->Name("local_phases/serial");
BENCHMARK(BM_LocalPhases<false>)->Args({2, 512})->Args({3, 64})->Name("local_phases/omp");
BENCHMARK(BM_DftDirect)->Args({2, 64})->Args({2, 256})->Name("dft/direct");
BENCHMARK(BM_DftFftw)->Args({2, 64})->Args({2, 256})->Args({2, 512})->Name("dft/fftw");
BENCHMARK(BM_Step)->Args({2, 512})->Args({3, 64})->Name("step");
BENCHMARK(BM_Schmidt)->Arg(128)->Arg(256)->Arg(512)->Name("schmidt")->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
