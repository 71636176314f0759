#include <benchmark/benchmark.h>

#include "gridarb/optimizer.hpp"
#include "gridarb/spm/cell.hpp"

using namespace gridarb;

static void BM_SpmStep(benchmark::State& state) {
  const spm::SpmModel m(spm::SpmParams::defaults());
  auto s = m.fresh_state(0.5);
  double current = 2.7;
  for (auto _ : state) {
    s = m.step(s, current, 60.0).state;
    if (m.soc_estimate(s) < 0.2) current = -2.7;
    if (m.soc_estimate(s) > 0.8) current = 2.7;
    benchmark::DoNotOptimize(s.conc_n.data());
  }
}
BENCHMARK(BM_SpmStep);

static void BM_SpmClampedPowerStep(benchmark::State& state) {
  const spm::SpmModel m(spm::SpmParams::defaults());
  const spm::VoltageWindow w{2.7, 4.2};
  auto s = m.fresh_state(0.5);
  double power = 10.0;
  bool hold = false;
  for (auto _ : state) {
    const auto r = m.step_power(s, power, 60.0, w, hold);
    hold = r.cv_hold;
    s = r.state;
    if (hold) {
      power = -power;
      hold = false;
    }
    benchmark::DoNotOptimize(r.voltage_v);
  }
}
BENCHMARK(BM_SpmClampedPowerStep);

// One two-day planning rollout, the unit of work of the physics-based optimiser.
static void BM_SpmRollout48h(benchmark::State& state) {
  const spm::SpmModel m(spm::SpmParams::defaults());
  SpmPlanning planning;
  planning.substep_s = static_cast<double>(state.range(0));
  const auto roll = spm_rollout(m, m.fresh_state(0.5), planning);
  std::vector<double> profile(48, 0.0);
  for (int h = 0; h < 48; ++h) profile[h] = (h % 12 < 4) ? -8.0 : (h % 12 < 8 ? 8.0 : 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(roll(profile).capacity_lost_wh);
}
BENCHMARK(BM_SpmRollout48h)->Arg(600)->Arg(1200)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
