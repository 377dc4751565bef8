// SPDX-License-Identifier: MIT
//
// Microbenchmarks for the hot paths of the simulation loop: kernel
// evaluation, one-pass regression fitting, and a full estimator pass.
#include <benchmark/benchmark.h>

#include <cstdint>

#include "haarcov/dyadic.hpp"
#include "haarcov/estimator.hpp"
#include "haarcov/model.hpp"
#include "haarcov/nuisance.hpp"
#include "haarcov/rng.hpp"

namespace {

using namespace haarcov;

Dataset make_data(const Dgp& dgp, std::int64_t n, int folds) {
  RngStream rng = RngStream::derive(42, 0, 0);
  Dataset data = sample(dgp, n, rng);
  data.assign_folds(folds);
  return data;
}

void BM_KernelEval(benchmark::State& state) {
  const auto res = DyadicResolution::from_level(static_cast<int>(state.range(0)), 1);
  const double x = 0.37241;
  const double y = 0.37199;
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernel_eval(res, {&x, 1}, {&y, 1}));
  }
}
BENCHMARK(BM_KernelEval)->Arg(4)->Arg(10);

void BM_FitRegression(benchmark::State& state) {
  const Dgp dgp = worst_case_dgp(0.5, 0.5, 1, 0.4, 12);
  const std::int64_t n = state.range(0);
  const Dataset data = make_data(dgp, n, 1);
  const auto res = DyadicResolution::from_level(6, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit_regression(data, 0, ResponseColumn::kA, res));
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_FitRegression)->Arg(1 << 10)->Arg(1 << 14);

void BM_EstimateIfDouble(benchmark::State& state) {
  const Dgp dgp = worst_case_dgp(0.25, 0.25, 1, 0.1, 12);
  const std::int64_t n = state.range(0);
  const Dataset data = make_data(dgp, 3 * n, 3);
  EstimatorConfig cfg;
  cfg.kind = EstimatorKind::kIf;
  cfg.scheme = SplitScheme::kDouble;
  cfg.k1 = DyadicResolution::from_level(5, 1);
  cfg.k2 = DyadicResolution::from_level(5, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_estimator(cfg, data, dgp));
  }
  state.SetItemsProcessed(state.iterations() * 3 * n);
}
BENCHMARK(BM_EstimateIfDouble)->Arg(1 << 10)->Arg(1 << 13);

void BM_SampleWorstCase(benchmark::State& state) {
  const Dgp dgp = worst_case_dgp(0.15, 0.15, 1, 0.35, 30, -4.0, 4.0);
  const std::int64_t n = state.range(0);
  std::uint64_t rep = 0;
  for (auto _ : state) {
    RngStream rng = RngStream::derive(7, 0, rep++);
    benchmark::DoNotOptimize(sample(dgp, n, rng));
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_SampleWorstCase)->Arg(1 << 12);

}  // namespace

BENCHMARK_MAIN();
