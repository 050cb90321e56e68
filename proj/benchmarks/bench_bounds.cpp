#include <benchmark/benchmark.h>

#include <random>

#include "edbound/edbound.hpp"

namespace {

using namespace edbound;

void BM_ConstantC(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(square_law_constant_c(1e-15));
}
BENCHMARK(BM_ConstantC);

void BM_ConstantD(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(square_law_constant_d(1e-13));
}
BENCHMARK(BM_ConstantD);

void BM_TwoLevelLower(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(thm5_two_level_lower(1.0, 0.5, 2.0, 4.0));
}
BENCHMARK(BM_TwoLevelLower);

void BM_TwoLevelClosedForm(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(thm6_two_level(1.0, 0.5, 2.0, 4.0));
}
BENCHMARK(BM_TwoLevelClosedForm);

// optimize_e0 on geometric truncations of increasing depth.
void BM_OptimizeE0(benchmark::State& state) {
  const GeometricSpec spec{1.5, 8.0, static_cast<std::size_t>(state.range(0))};
  const auto p = expand_geometric(spec, *spec.levels);
  for (auto _ : state) benchmark::DoNotOptimize(optimize_e0(p));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_OptimizeE0)->RangeMultiplier(4)->Range(2, 128)->Complexity();

void BM_GeometricPartialSums(benchmark::State& state) {
  const GeometricSpec spec{1.1, 100.0, std::nullopt};
  const auto k = truncation_level(spec, 1e-12);
  for (auto _ : state) {
    benchmark::DoNotOptimize(thm3_partial_sum(spec, k));
    benchmark::DoNotOptimize(thm4_partial_sum(spec, k));
  }
}
BENCHMARK(BM_GeometricPartialSums);

void BM_GridOracle(benchmark::State& state) {
  const oracle::OracleConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(oracle::grid_max_tau1(1.0, 0.5, 2.0, 4.0, cfg));
}
BENCHMARK(BM_GridOracle);

void BM_GoldenOracle(benchmark::State& state) {
  const oracle::OracleConfig cfg;
  const auto p = make_staircase({1.0, 2.0}, {2.0, 4.0});
  for (auto _ : state) benchmark::DoNotOptimize(oracle::golden_min_e0(p, cfg));
}
BENCHMARK(BM_GoldenOracle);

}  // namespace

BENCHMARK_MAIN();
