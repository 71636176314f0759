#pragma once

// Independent reference computations and random generators shared by tests.

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace gridarb::oracle {

/// Seeded generator for hand-rolled property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : engine_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }
  bool coin() { return integer(0, 1) == 1; }
  std::vector<double> vector(std::size_t n, double lo, double hi) {
    std::vector<double> v(n);
    for (double& x : v) x = uniform(lo, hi);
    return v;
  }

 private:
  std::mt19937_64 engine_;
};

/// Plain bisection for a sign change of f on [lo, hi].
inline double bisect(const std::function<double(double)>& f, double lo, double hi, int iterations = 200) {
  double flo = f(lo);
  for (int i = 0; i < iterations; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
    if (hi - lo <= 0) break;
  }
  return 0.5 * (lo + hi);
}

/// Butler-Volmer flux for a given overpotential with charge-transfer coefficient alpha.
inline double butler_volmer_flux(double eta, double j0, double temperature_k, double alpha = 0.5) {
  constexpr double F = 96485.33212, R = 8.314462618;
  const double f = F / (R * temperature_k);
  return j0 * (std::exp(-alpha * f * eta) - std::exp((1.0 - alpha) * f * eta));
}

/// Best objective of a linear-model schedule over a power grid, by brute force.
/// Returns -inf if no grid schedule keeps the SoC inside the window.
struct LinearToy {
  std::vector<double> prices;  // EUR/MWh
  double energy_wh = 10.0, beta1 = 1.25e-5, beta2_h = 2.12e-4, limit_w = 10.0;
  double soc0 = 0.5, soc_min = 0.0, soc_max = 1.0;
  double theta = 1.0, deg_price = 330.0;
};

inline double linear_toy_objective(const LinearToy& t, const std::vector<double>& p) {
  double soc = t.soc0, revenue = 0.0, lost = 0.0, peak = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    soc -= p[i] / t.energy_wh;
    if (soc < t.soc_min - 1e-12 || soc > t.soc_max + 1e-12) return -INFINITY;
    revenue += p[i] * t.prices[i] * 1e-6;
    lost += t.beta1 * std::abs(p[i]);
    peak = std::max(peak, std::abs(p[i]));
  }
  lost += t.beta2_h * peak;
  return t.theta * revenue - (1.0 - t.theta) * lost / 1000.0 * t.deg_price;
}

inline double enumerate_linear_toy(const LinearToy& t, const std::vector<double>& levels,
                                   std::vector<double>* best_schedule = nullptr) {
  const std::size_t n = t.prices.size();
  std::vector<std::size_t> idx(n, 0);
  std::vector<double> p(n);
  double best = -INFINITY;
  while (true) {
    for (std::size_t i = 0; i < n; ++i) p[i] = levels[idx[i]];
    const double v = linear_toy_objective(t, p);
    if (v > best) {
      best = v;
      if (best_schedule) *best_schedule = p;
    }
    std::size_t k = 0;
    while (k < n && ++idx[k] == levels.size()) idx[k++] = 0;
    if (k == n) break;
  }
  return best;
}

}  // namespace gridarb::oracle
