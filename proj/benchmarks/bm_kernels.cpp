#include <benchmark/benchmark.h>

#include "sumlab/energy.hpp"
#include "sumlab/families.hpp"
#include "sumlab/incidence.hpp"
#include "sumlab/subgroups.hpp"

namespace {

sumlab::GSet random_set(benchmark::State& state) {
  return sumlab::generate("rand(n=" + std::to_string(state.range(0)) + ",seed=1)");
}

void BM_Energy(benchmark::State& state) {
  const auto a = random_set(state);
  for (auto _ : state) benchmark::DoNotOptimize(sumlab::energy(a));
}
BENCHMARK(BM_Energy)->RangeMultiplier(4)->Range(16, 1024);

void BM_E3(benchmark::State& state) {
  const auto a = random_set(state);
  for (auto _ : state) benchmark::DoNotOptimize(sumlab::moment_energy(a, 3));
}
BENCHMARK(BM_E3)->RangeMultiplier(4)->Range(16, 1024);

void BM_T3(benchmark::State& state) {
  const auto a = random_set(state);
  for (auto _ : state) benchmark::DoNotOptimize(sumlab::t_k(a, 3));
}
BENCHMARK(BM_T3)->RangeMultiplier(2)->Range(16, 128);

void BM_CollinearTriples(benchmark::State& state) {
  const auto a = sumlab::generate("ap(n=" + std::to_string(state.range(0)) + ")");
  for (auto _ : state) benchmark::DoNotOptimize(sumlab::square_grid_triples(a));
}
BENCHMARK(BM_CollinearTriples)->RangeMultiplier(2)->Range(8, 128);

void BM_GapH(benchmark::State& state) {
  const auto p = static_cast<std::uint64_t>(state.range(0));
  const auto ctx = sumlab::subgroup_context(p, (p - 1) / 2);
  for (auto _ : state) benchmark::DoNotOptimize(sumlab::gap_H(ctx).H);
}
BENCHMARK(BM_GapH)->Arg(1009)->Arg(10007)->Arg(99991);

void BM_WindowCounts(benchmark::State& state) {
  const auto ctx = sumlab::subgroup_context(10007, 5003);
  for (auto _ : state) benchmark::DoNotOptimize(sumlab::window_counts(ctx, static_cast<std::uint64_t>(state.range(0))));
}
BENCHMARK(BM_WindowCounts)->Arg(10)->Arg(100)->Arg(1000);

}  // namespace
BENCHMARK_MAIN();
