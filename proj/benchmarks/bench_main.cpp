#include <benchmark/benchmark.h>

#include "onesided/baselines.hpp"
#include "onesided/kernel_regression.hpp"
#include "onesided/nn_completion.hpp"
#include "onesided/row_distance.hpp"
#include "onesided/synthgen.hpp"

using namespace onesided;

namespace {

SyntheticInstance instance(std::size_t n, std::size_t m, double p) {
  SynthConfig cfg;
  cfg.n = n;
  cfg.m = m;
  cfg.p = p;
  cfg.sigma = 0.2;
  cfg.function = make_latent_function(LatentFunctionId::F3);
  cfg.seed = SeedSpec{1, 0, 0};
  return generate(cfg);
}

void BM_FitRows(benchmark::State& state) {
  const auto inst = instance(static_cast<std::size_t>(state.range(0)), 500, 0.05);
  for (auto _ : state) benchmark::DoNotOptimize(fit_rows(inst.data, 0.1).fhat.data());
}
BENCHMARK(BM_FitRows)->Arg(100)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_EstimateDistances(benchmark::State& state) {
  const auto inst = instance(static_cast<std::size_t>(state.range(0)), 500, 0.05);
  const auto fit = fit_rows(inst.data, 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(estimate_distances(fit, 0.2).dsq.data());
}
BENCHMARK(BM_EstimateDistances)->Arg(100)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_NnPredict(benchmark::State& state) {
  const auto inst = instance(static_cast<std::size_t>(state.range(0)), 500, 0.05);
  const auto d = estimate_distances(fit_rows(inst.data, 0.1), 0.2);
  const NeighborhoodSpec spec{KNearestRule{10}, 0.05};
  for (auto _ : state) benchmark::DoNotOptimize(nn_predict(inst.data, d, spec).values.data());
}
BENCHMARK(BM_NnPredict)->Arg(100)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_Als(benchmark::State& state) {
  const auto inst = instance(200, 500, 0.05);
  AlsConfig cfg;
  cfg.ridge = 1.0;
  for (auto _ : state) benchmark::DoNotOptimize(als_fit(inst.data, cfg).values.data());
}
BENCHMARK(BM_Als)->Unit(benchmark::kMillisecond);

void BM_SoftImpute(benchmark::State& state) {
  const auto inst = instance(200, 500, 0.05);
  auto cfg = default_softimpute_config(inst.data);
  cfg.lambda_grid.resize(5);
  for (auto _ : state) benchmark::DoNotOptimize(softimpute_fit(inst.data, cfg).values.data());
}
BENCHMARK(BM_SoftImpute)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
