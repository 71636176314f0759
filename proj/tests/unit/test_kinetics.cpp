#include <gtest/gtest.h>

#include <cmath>

#include "gridarb/common/errors.hpp"
#include "gridarb/spm/kinetics.hpp"
#include "oracles.hpp"

using namespace gridarb;
using namespace gridarb::spm;

namespace {
constexpr double F = 96485.33212;
constexpr double R = 8.314462618;
}  // namespace

TEST(ButlerVolmer, ZeroFluxZeroOverpotential) {
  EXPECT_EQ(butler_volmer_overpotential(0.0, 1e-5, 298.15), 0.0);
}

TEST(ButlerVolmer, Antisymmetric) {
  oracle::Gen g(21);
  for (int i = 0; i < 1000; ++i) {
    const double j = g.uniform(-1e-4, 1e-4);
    const double j0 = g.log_uniform(1e-8, 1e-3);
    const double t = g.uniform(260, 340);
    EXPECT_NEAR(butler_volmer_overpotential(-j, j0, t), -butler_volmer_overpotential(j, j0, t), 1e-12);
  }
}

TEST(ButlerVolmer, ClosedFormMatchesBisection) {
  oracle::Gen g(22);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double j0 = g.log_uniform(1e-8, 1e-3);
    const double j = (g.coin() ? 1 : -1) * j0 * g.log_uniform(1e-4, 1e4);
    const double t = g.uniform(260, 340);
    const double root = oracle::bisect(
        [&](double eta) { return oracle::butler_volmer_flux(eta, j0, t) - j; }, -2.0, 2.0);
    worst = std::max(worst, std::abs(butler_volmer_overpotential(j, j0, t) - root));
  }
  EXPECT_LT(worst, 1e-10);
}

TEST(ButlerVolmer, RejectsNonPositiveExchange) {
  EXPECT_THROW(butler_volmer_overpotential(1e-6, 0.0, 298.15), std::invalid_argument);
}

TEST(ExchangeFlux, MidpointSimplifies) {
  const double cmax = 30000, ce = 1000, k = 2e-11;
  const double expected = F * k * std::sqrt(ce) * (cmax / 2);
  EXPECT_NEAR(exchange_flux(cmax / 2, cmax, ce, k, 0.5), expected, 1e-12 * expected);
}

TEST(ExchangeFlux, MatchesDirectEvaluation) {
  oracle::Gen g(23);
  for (int i = 0; i < 500; ++i) {
    const double cmax = g.uniform(2e4, 6e4);
    const double cs = g.uniform(1e-3, 1 - 1e-3) * cmax;
    const double ce = g.uniform(500, 1500);
    const double k = g.log_uniform(1e-18, 1e-10);
    const double alpha = g.coin() ? 0.5 : g.uniform(0.3, 0.7);
    const double expected =
        F * k * std::pow(cs, alpha) * std::pow(ce, 1 - alpha) * std::pow(cmax - cs, 1 - alpha);
    EXPECT_NEAR(exchange_flux(cs, cmax, ce, k, alpha), expected, 1e-12 * expected);
  }
}

TEST(ExchangeFlux, VanishesAtTheEdgesAndStallsOnThem) {
  const double cmax = 30000;
  const double mid = exchange_flux(cmax / 2, cmax, 1000, 1e-11, 0.5);
  EXPECT_LT(exchange_flux(1e-6 * cmax, cmax, 1000, 1e-11, 0.5), 1e-2 * mid);
  EXPECT_LT(exchange_flux((1 - 1e-6) * cmax, cmax, 1000, 1e-11, 0.5), 1e-2 * mid);
  try {
    exchange_flux(0.0, cmax, 1000, 1e-11, 0.5);
    FAIL();
  } catch (const ModelFault& e) {
    EXPECT_EQ(e.kind(), FaultKind::kKineticsStall);
  }
  EXPECT_THROW(exchange_flux(cmax, cmax, 1000, 1e-11, 0.5), ModelFault);
}

TEST(Arrhenius, IdentityAtReference) {
  EXPECT_EQ(arrhenius_scale(3.5e-14, 30000, 298.15, 298.15), 3.5e-14);
}

TEST(Arrhenius, ZeroActivationIsConstant) {
  for (double t = 250; t < 350; t += 7.3) EXPECT_EQ(arrhenius_scale(2.0, 0.0, t, 298.15), 2.0);
}

TEST(Arrhenius, IncreasesWithTemperature) {
  double last = 0.0;
  for (double t = 278.0; t <= 318.0; t += 0.5) {
    const double v = arrhenius_scale(1.0, 35000, t, 298.15);
    EXPECT_GT(v, last);
    last = v;
  }
  EXPECT_NEAR(arrhenius_scale(1.0, 35000, 318.15, 298.15),
              std::exp(35000 / R * (1 / 298.15 - 1 / 318.15)), 1e-12);
}

TEST(SeiFlux, ZeroPrefactorNoGrowth) {
  EXPECT_EQ(sei_flux(-0.2, 1e-8, 298.15, SeiRates{0.0, 0.5, 1e-18, 4541}), 0.0);
}

TEST(SeiFlux, ThickerFilmGrowsSlower) {
  const SeiRates r{1e-6, 0.5, 1e-19, 4541};
  double last = INFINITY;
  for (double d = 0.0; d < 1e-6; d += 5e-8) {
    const double j = sei_flux(0.1, d, 298.15, r);
    EXPECT_LT(j, last);
    last = j;
  }
}

TEST(SeiFlux, ChargingBeatsRestBeatsDischarge) {
  const SeiRates r{1e-6, 0.5, 1e-18, 4541};
  const double charging = sei_flux(-0.05, 5e-9, 298.15, r);
  const double rest = sei_flux(0.0, 5e-9, 298.15, r);
  const double discharging = sei_flux(0.05, 5e-9, 298.15, r);
  EXPECT_GT(charging, rest);
  EXPECT_GT(rest, discharging);
}

TEST(SeiFlux, LimitingRegimes) {
  const SeiRates r{1e-6, 0.5, 1e-18, 4541};
  const double t = 298.15;
  const double kinetic = 1e-6 / F * std::exp(-0.5 * F * 0.1 / (R * t));
  EXPECT_NEAR(sei_flux(0.1, 0.0, t, r), kinetic, 1e-15 * kinetic);
  const double thick = 1e-2;
  const double diffusive = r.diffusion_m2_s * r.solvent_concentration_mol_m3 / thick;
  EXPECT_NEAR(sei_flux(-1.0, thick, t, r), diffusive, 1e-6 * diffusive);
}
