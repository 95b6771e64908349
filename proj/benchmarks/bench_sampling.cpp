#include <benchmark/benchmark.h>

#include "lhvbell/bell_analysis.hpp"
#include "lhvbell/gaussian_core.hpp"
#include "lhvbell/lhv_model.hpp"

namespace {

using namespace lhvbell;

void BM_Philox(benchmark::State& state) {
  PhiloxCounter ctr{0, 0, 0, 0};
  const PhiloxKey key{0x1234u, 0x5678u};
  for (auto _ : state) {
    ++ctr[0];
    benchmark::DoNotOptimize(philox4x32_10(ctr, key));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Philox);

void BM_GaussianPair(benchmark::State& state) {
  const RandomStream stream{7, 0};
  std::uint64_t block = 0;
  for (auto _ : state) benchmark::DoNotOptimize(stream.gaussian_pair(block++));
  state.SetItemsProcessed(2 * state.iterations());
}
BENCHMARK(BM_GaussianPair);

void BM_SampleHiddenVariables(benchmark::State& state) {
  const GaussianSampler sampler(build_covariance(0.2));
  const RandomStream stream{7, 0};
  std::uint64_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sampler(stream, i++));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SampleHiddenVariables);

void BM_SampleAndAccumulate(benchmark::State& state) {
  const auto rep = static_cast<Representation>(state.range(0));
  const GaussianSampler sampler(build_covariance(0.2));
  const RandomStream stream{7, 0};
  JointMomentAccumulator acc(rep);
  std::uint64_t i = 0;
  for (auto _ : state) acc.add(count_rates(sampler(stream, i++), {0.0, 0.3}, rep));
  benchmark::DoNotOptimize(acc.denominator_sum());
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SampleAndAccumulate)
    ->Arg(static_cast<int>(Representation::QuadratureDerived))
    ->Arg(static_cast<int>(Representation::WignerIntensity));

void BM_BellS(benchmark::State& state) {
  const auto model = build_covariance(0.2);
  const std::uint64_t n = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(bell_s(model, BellAngles::standard(),
                                    Representation::WignerIntensity, n, RandomStream{1, 0}));
  }
  state.SetItemsProcessed(4 * n * state.iterations());
}
BENCHMARK(BM_BellS)->Arg(100000)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
