#include <benchmark/benchmark.h>

#include <cstdint>
#include <random>

#include "bandedge/dynamics.hpp"
#include "bandedge/eigensolve.hpp"
#include "bandedge/lattice.hpp"
#include "bandedge/variational.hpp"
#include "bandedge/wvn.hpp"

namespace {

constexpr double kAlpha = 2.6457513110645906;

bandedge::TridiagonalSystem wvn_system(std::int64_t window) {
    const auto pair = bandedge::build_wvn(kAlpha);
    return bandedge::truncate(pair.potential(window), 0, window - 1);
}

void bm_sturm_count(benchmark::State& state) {
    const auto system = wvn_system(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(bandedge::sturm_count(system, 2.25));
}
BENCHMARK(bm_sturm_count)->Arg(10000)->Arg(100000);

void bm_highest_eigenvalue(benchmark::State& state) {
    const auto system = wvn_system(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(bandedge::highest_eigenvalue(system));
}
BENCHMARK(bm_highest_eigenvalue)->Arg(10000)->Arg(100000);

void bm_dense_oracle(benchmark::State& state) {
    const auto system = wvn_system(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(bandedge::dense_oracle(system));
}
BENCHMARK(bm_dense_oracle)->Arg(200)->Arg(500);

void bm_transfer_solve(benchmark::State& state) {
    const auto pair = bandedge::build_wvn(kAlpha);
    const auto potential = pair.potential(1);
    for (auto _ : state)
        benchmark::DoNotOptimize(
            bandedge::transfer_solve(potential, 0.7, 0.0, state.range(0)));
}
BENCHMARK(bm_transfer_solve)->Arg(100000)->Arg(1000000);

void bm_tail_sum(benchmark::State& state) {
    const auto pair = bandedge::build_wvn(kAlpha);
    const auto potential = pair.potential(1);
    for (auto _ : state)
        benchmark::DoNotOptimize(bandedge::tail_sum(potential, 5));
}
BENCHMARK(bm_tail_sum);

void bm_shell_cutoff_energy(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(bandedge::shell_cutoff_energy(
            2, 100, state.range(0), bandedge::CutoffProfile::Kind::log_2d));
}
BENCHMARK(bm_shell_cutoff_energy)->Arg(100000)->Arg(1000000);

void bm_certificate_1d(benchmark::State& state) {
    const auto model = bandedge::free_lattice_1d();
    bandedge::SparseVector v;
    v.sites.push_back({0, 0, 1.0});
    bandedge::CertificateSearch search;
    search.run_oracle = false;
    for (auto _ : state)
        benchmark::DoNotOptimize(
            bandedge::criticality_certificate(model, v, search));
}
BENCHMARK(bm_certificate_1d);

}  // namespace

BENCHMARK_MAIN();
