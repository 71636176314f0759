#include <gtest/gtest.h>

#include <cmath>

#include "gridarb/common/errors.hpp"
#include "gridarb/lp.hpp"
#include "gridarb/optimizer.hpp"
#include "oracles.hpp"

using namespace gridarb;

namespace {

const std::vector<double> kLevels{-10, -5, 0, 5, 10};

PriceSeries series(std::vector<double> prices) {
  return PriceSeries(make_timestamp(2014, 6, 2), std::move(prices));
}

linear::LinearCellParams params_of(const oracle::LinearToy& t) {
  linear::LinearCellParams p;
  p.nominal_energy_wh = t.energy_wh;
  p.beta1 = t.beta1;
  p.beta2_h = t.beta2_h;
  p.power_limit_w = t.limit_w;
  p.soc_min = t.soc_min;
  p.soc_max = t.soc_max;
  return p;
}

ObjectiveConfig config_of(const oracle::LinearToy& t) {
  ObjectiveConfig c;
  c.theta = t.theta;
  c.degradation_price_eur_kwh = t.deg_price;
  c.horizon_h = static_cast<int>(t.prices.size());
  c.commit_h = c.horizon_h;
  return c;
}

bool on_grid(const std::vector<double>& p) {
  for (double x : p) {
    bool hit = false;
    for (double l : kLevels) hit = hit || std::abs(x - l) < 1e-9;
    if (!hit) return false;
  }
  return true;
}

}  // namespace

TEST(Simplex, TextbookMaximum) {
  lp::LinearProgram prog;
  const int x = prog.add_variable(3.0, 4.0);
  const int y = prog.add_variable(5.0);
  prog.add_constraint({{y, 2.0}}, lp::Sense::kLessEqual, 12.0);
  prog.add_constraint({{x, 3.0}, {y, 2.0}}, lp::Sense::kLessEqual, 18.0);
  const auto sol = lp::solve(prog);
  EXPECT_NEAR(sol.objective, 36.0, 1e-12);
  EXPECT_NEAR(sol.x[x], 2.0, 1e-12);
  EXPECT_NEAR(sol.x[y], 6.0, 1e-12);
}

TEST(Simplex, EqualityAndGreaterEqual) {
  // max -x - y s.t. x + y >= 2, x - y = 1
  lp::LinearProgram prog;
  const int x = prog.add_variable(-1.0);
  const int y = prog.add_variable(-1.0);
  prog.add_constraint({{x, 1.0}, {y, 1.0}}, lp::Sense::kGreaterEqual, 2.0);
  prog.add_constraint({{x, 1.0}, {y, -1.0}}, lp::Sense::kEqual, 1.0);
  const auto sol = lp::solve(prog);
  EXPECT_NEAR(sol.objective, -2.0, 1e-12);
  EXPECT_NEAR(sol.x[x], 1.5, 1e-12);
  EXPECT_NEAR(sol.x[y], 0.5, 1e-12);
}

TEST(Simplex, InfeasibleAndUnbounded) {
  lp::LinearProgram infeasible;
  const int x = infeasible.add_variable(1.0, 1.0);
  infeasible.add_constraint({{x, 1.0}}, lp::Sense::kGreaterEqual, 2.0);
  EXPECT_THROW(lp::solve(infeasible), InfeasibleError);

  lp::LinearProgram unbounded;
  const int u = unbounded.add_variable(1.0);
  const int v = unbounded.add_variable(0.0);
  unbounded.add_constraint({{u, 1.0}, {v, -1.0}}, lp::Sense::kLessEqual, 1.0);
  EXPECT_THROW(lp::solve(unbounded), InfeasibleError);
}

TEST(OptimizeLinear, TwoStepToyChargesThenDischarges) {
  linear::LinearCellParams p;
  p.soc_min = 0.0;
  p.soc_max = 1.0;
  ObjectiveConfig c;
  c.theta = 1.0;
  c.horizon_h = c.commit_h = 2;
  const auto s = optimize_linear(series({10, 50}), p, c, 0.0);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_NEAR(s.power_w[0], -10.0, 1e-9);
  EXPECT_NEAR(s.power_w[1], 10.0, 1e-9);
  EXPECT_NEAR(s.revenue, 4.0e-4, 1e-15);

  oracle::LinearToy toy;
  toy.prices = {10, 50};
  toy.soc0 = 0.0;
  std::vector<double> best;
  EXPECT_NEAR(oracle::enumerate_linear_toy(toy, kLevels, &best), 4.0e-4, 1e-15);
  EXPECT_EQ(best, (std::vector<double>{-10, 10}));
}

TEST(OptimizeLinear, ConstantPricesDoNothingWhenDegradationCosts) {
  linear::LinearCellParams p;
  ObjectiveConfig c;
  c.theta = 0.5;
  c.horizon_h = c.commit_h = 24;
  const auto s = optimize_linear(series(std::vector<double>(24, 42.0)), p, c, 0.0);
  for (double x : s.power_w) EXPECT_NEAR(x, 0.0, 1e-9);
  EXPECT_NEAR(s.objective, 0.0, 1e-15);
}

TEST(OptimizeLinear, ConstantPricesNeverCharge) {
  // stored energy has no terminal value, so a half-full cell may sell it but never buys
  linear::LinearCellParams p;
  ObjectiveConfig c;
  c.theta = 0.5;
  c.horizon_h = c.commit_h = 24;
  const auto s = optimize_linear(series(std::vector<double>(24, 42.0)), p, c, 0.5);
  for (double x : s.power_w) EXPECT_GE(x, -1e-9);
}

TEST(OptimizeLinear, MatchesEnumerationOnRandomInstances) {
  oracle::Gen g(51);
  int on_grid_cases = 0;
  for (int trial = 0; trial < 40; ++trial) {
    oracle::LinearToy toy;
    toy.prices = g.vector(8, -10.0, 90.0);
    toy.theta = g.coin() ? 1.0 : g.uniform(0.5, 1.0);
    toy.soc0 = 0.5;
    const auto s = optimize_linear(series(toy.prices), params_of(toy), config_of(toy), toy.soc0);
    const double brute = oracle::enumerate_linear_toy(toy, kLevels);
    EXPECT_GE(s.objective, brute - 1e-9);
    EXPECT_NEAR(oracle::linear_toy_objective(toy, s.power_w), s.objective, 1e-9);
    if (on_grid(s.power_w)) {
      ++on_grid_cases;
      EXPECT_NEAR(s.objective, brute, 1e-9);
    }
  }
  EXPECT_GT(on_grid_cases, 0);
}

TEST(OptimizeLinear, PriceScalingScalesObjective) {
  oracle::Gen g(52);
  for (int trial = 0; trial < 20; ++trial) {
    oracle::LinearToy toy;
    toy.prices = g.vector(12, 5.0, 80.0);
    const double c = g.log_uniform(0.1, 10.0);
    auto scaled = toy;
    for (double& x : scaled.prices) x *= c;
    const auto a = optimize_linear(series(toy.prices), params_of(toy), config_of(toy), 0.5);
    const auto b = optimize_linear(series(scaled.prices), params_of(scaled), config_of(scaled), 0.5);
    EXPECT_NEAR(b.objective, c * a.objective, 1e-9 * std::max(1.0, std::abs(b.objective)));
    EXPECT_NEAR(oracle::linear_toy_objective(scaled, a.power_w), b.objective, 1e-12);
  }
}

TEST(OptimizeLinear, RespectsWindowAndLimit) {
  oracle::Gen g(53);
  oracle::LinearToy toy;
  toy.prices = g.vector(48, 0.0, 100.0);
  toy.soc_min = 0.1;
  toy.soc_max = 0.9;
  toy.theta = 0.5;
  const auto s = optimize_linear(series(toy.prices), params_of(toy), config_of(toy), 0.5);
  for (std::size_t i = 0; i < s.size(); ++i) {
    EXPECT_LE(std::abs(s.power_w[i]), 10.0 + 1e-9);
    EXPECT_GE(s.soc[i], 0.1 - 1e-9);
    EXPECT_LE(s.soc[i], 0.9 + 1e-9);
  }
  const auto v = combine_objective(s.theta, s.revenue, s.degradation_cost);
  EXPECT_NEAR(v.objective, s.objective, 1e-9);
}

TEST(OptimizeLinear, InfeasibleStartRejected) {
  linear::LinearCellParams p;
  p.soc_min = 0.2;
  p.soc_max = 0.8;
  ObjectiveConfig c;
  c.horizon_h = c.commit_h = 2;
  EXPECT_THROW(optimize_linear(series({10, 20}), p, c, 0.95), InfeasibleError);
}
