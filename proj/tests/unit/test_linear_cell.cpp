#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "gridarb/common/errors.hpp"
#include "gridarb/linear_cell.hpp"
#include "oracles.hpp"

using namespace gridarb;
using namespace gridarb::linear;

TEST(LinearStep, IdleKeepsSocAndCapacity) {
  const LinearCellParams p;
  const LinearCellState s = linear_step({0.5, 0.0, 0.0}, 0.0, 1.0, p);
  EXPECT_EQ(s.soc, 0.5);
  EXPECT_EQ(s.capacity_lost_wh, 0.0);
}

TEST(LinearStep, OneHourAtRatedPowerFillsEmptyCell) {
  const LinearCellParams p;
  const LinearCellState s = linear_step({0.0, 0.0, 0.0}, -10.0, 1.0, p);
  EXPECT_DOUBLE_EQ(s.soc, 1.0);
  EXPECT_EQ(s.peak_power_w, 10.0);
}

TEST(LinearStep, EightThousandCyclesCostTwentyPercent) {
  // 8000 full equivalent cycles = 8000 * 2 * 10 Wh of throughput.
  const LinearCellParams p;
  const double throughput_wh = 8000.0 * 2.0 * p.nominal_energy_wh;
  EXPECT_DOUBLE_EQ(throughput_wh, 160000.0);
  const double oracle = 0.2 * p.nominal_energy_wh / (8000.0 * 2.0 * p.nominal_energy_wh);
  EXPECT_DOUBLE_EQ(p.beta1, oracle);

  LinearCellState s{0.0, 0.0, 0.0};
  for (int cycle = 0; cycle < 8000; ++cycle) {
    s = linear_step(s, -10.0, 1.0, p);
    s = linear_step(s, 10.0, 1.0, p);
  }
  EXPECT_NEAR(s.capacity_lost_wh, 2.0, 1e-9);
}

TEST(LinearStep, RejectsLeavingTheWindow) {
  LinearCellParams p;
  p.soc_min = 0.1;
  p.soc_max = 0.9;
  EXPECT_THROW(linear_step({0.85, 0.0, 0.0}, -1.0, 1.0, p), ModelFault);
  EXPECT_THROW(linear_step({0.15, 0.0, 0.0}, 1.0, 1.0, p), ModelFault);
  EXPECT_NO_THROW(linear_step({0.9, 0.0, 0.0}, 0.0, 1.0, p));
}

TEST(LinearStep, RejectsBadInputs) {
  const LinearCellParams p;
  EXPECT_THROW(linear_step({0.5, 0, 0}, 11.0, 0.1, p), std::invalid_argument);
  EXPECT_THROW(linear_step({0.5, 0, 0}, 1.0, 0.0, p), std::invalid_argument);
  LinearCellParams bad;
  bad.soc_min = 0.6;
  bad.soc_max = 0.4;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
}

TEST(LinearHorizon, PeakChargedOnceAndReset) {
  const LinearCellParams p;
  LinearCellState s{0.5, 0.0, 0.0};
  s = linear_step(s, 4.0, 0.5, p);
  s = linear_step(s, -7.0, 0.5, p);
  const double before = s.capacity_lost_wh;
  s = close_horizon(s, p);
  EXPECT_DOUBLE_EQ(s.capacity_lost_wh - before, p.beta2_h * 7.0);
  EXPECT_EQ(s.peak_power_w, 0.0);
  const double again = close_horizon(s, p).capacity_lost_wh;
  EXPECT_EQ(again, s.capacity_lost_wh);
}

TEST(LinearProperties, StepSplittingIsExact) {
  oracle::Gen g(11);
  const LinearCellParams p;
  for (int i = 0; i < 500; ++i) {
    const double power = g.uniform(-10, 10);
    const double dt = g.uniform(0.01, 0.1);
    const LinearCellState s0{g.uniform(0.3, 0.7), g.uniform(0, 1), 0.0};
    const auto once = linear_step(s0, power, 2 * dt, p);
    const auto twice = linear_step(linear_step(s0, power, dt, p), power, dt, p);
    EXPECT_NEAR(once.soc, twice.soc, 1e-12);
    EXPECT_NEAR(once.capacity_lost_wh, twice.capacity_lost_wh, 1e-12);
  }
}

TEST(LinearProperties, LossIsThroughputIndependentOfOrder) {
  oracle::Gen g(12);
  LinearCellParams p;
  p.beta2_h = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> profile = g.vector(24, -0.3, 0.3);
    double throughput = 0.0;
    for (double x : profile) throughput += std::abs(x) * 0.5;
    LinearCellState a{0.5, 0, 0};
    for (double x : profile) a = linear_step(a, x, 0.5, p);
    std::reverse(profile.begin(), profile.end());
    LinearCellState b{0.5, 0, 0};
    for (double x : profile) b = linear_step(b, x, 0.5, p);
    EXPECT_NEAR(a.capacity_lost_wh, p.beta1 * throughput, 1e-15);
    EXPECT_NEAR(b.capacity_lost_wh, a.capacity_lost_wh, 1e-15);
    EXPECT_NEAR(profile_capacity_loss_wh(profile, 0.5, p), a.capacity_lost_wh, 1e-15);
  }
}

TEST(LinearProperties, ChargeThenDischargeReturnsSoc) {
  oracle::Gen g(13);
  const LinearCellParams p;
  for (int i = 0; i < 200; ++i) {
    const double soc = g.uniform(0.2, 0.8);
    const double power = g.uniform(0.0, 10.0);
    const double dt = g.uniform(0.0, 0.15) + 1e-3;
    const auto s = linear_step(linear_step({soc, 0, 0}, -power, dt, p), power, dt, p);
    EXPECT_NEAR(s.soc, soc, 1e-14);
  }
}

TEST(LinearProperties, PeakIsMaxNormAndLossMonotone) {
  oracle::Gen g(14);
  const LinearCellParams p;
  LinearCellState s{0.5, 0, 0};
  double peak = 0.0;
  for (int i = 0; i < 400; ++i) {
    const double x = g.uniform(-1.0, 1.0);
    const double lost = s.capacity_lost_wh;
    s = linear_step(s, x, 0.1, p);
    peak = std::max(peak, std::abs(x));
    EXPECT_EQ(s.peak_power_w, peak);
    EXPECT_GE(s.capacity_lost_wh, lost);
  }
}
