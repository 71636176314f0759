#include <benchmark/benchmark.h>

#include "gridarb/optimizer.hpp"

using namespace gridarb;

static void BM_OptimizeLinear(benchmark::State& state) {
  const auto hours = static_cast<int>(state.range(0));
  const auto prices = synthesize_prices(7, hours / 24);
  linear::LinearCellParams p;
  p.soc_min = 0.1;
  p.soc_max = 0.9;
  ObjectiveConfig cfg;
  cfg.theta = 0.5;
  cfg.horizon_h = cfg.commit_h = hours;
  for (auto _ : state) benchmark::DoNotOptimize(optimize_linear(prices, p, cfg, 0.5).objective);
}
BENCHMARK(BM_OptimizeLinear)->Arg(24)->Arg(48)->Arg(168)->Unit(benchmark::kMicrosecond);

static void BM_LinearYear(benchmark::State& state) {
  const auto prices = synthesize_prices(7, 365);
  ObjectiveConfig cfg;
  for (auto _ : state) {
    benchmark::DoNotOptimize(schedule_year(prices, linear::LinearCellParams{}, cfg, 0.5).schedule.revenue);
  }
}
BENCHMARK(BM_LinearYear)->Unit(benchmark::kMillisecond)->Iterations(1);

BENCHMARK_MAIN();
