#include "gridarb/spm/diffusion.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace gridarb::spm {

RadialGrid::RadialGrid(int shells, double radius_m) : shells_(shells), radius_(radius_m) {
  if (shells < 2 || !(radius_m > 0)) throw std::invalid_argument("RadialGrid: bad dimensions");
  const double r3 = radius_m * radius_m * radius_m;
  double inner = 0.0;
  for (int k = 1; k <= shells; ++k) {
    const double outer = k == shells ? radius_m : radius_m * std::cbrt(static_cast<double>(k) / shells);
    const double inner3 = inner * inner * inner;
    const double outer3 = outer * outer * outer;
    outer_radii_.push_back(outer);
    volumes_.push_back(r3 / (3.0 * shells));
    node_radii_.push_back(std::cbrt(0.5 * (inner3 + outer3)));
    inner = outer;
  }
}

double RadialGrid::mean(std::span<const double> conc) const {
  double sum = 0.0;
  for (std::size_t k = 0; k < conc.size(); ++k) sum += volumes_[k] * conc[k];
  return sum / total_volume();
}

ImplicitDiffusion::ImplicitDiffusion(const RadialGrid& grid, double diffusivity_m2_s, double dt_s)
    : grid_(&grid), diffusivity_(diffusivity_m2_s), dt_(dt_s) {
  if (!(diffusivity_m2_s > 0) || !(dt_s > 0)) {
    throw std::invalid_argument("ImplicitDiffusion: diffusivity and dt must be positive");
  }
  const int n = grid.shells();
  const auto vol = grid.volumes();
  const auto outer = grid.outer_radii();
  const auto node = grid.node_radii();

  std::vector<double> conductance(n > 0 ? n - 1 : 0);
  for (int k = 0; k + 1 < n; ++k) {
    conductance[k] = diffusivity_m2_s * outer[k] * outer[k] / (node[k + 1] - node[k]);
  }

  lower_.assign(n, 0.0);
  upper_mod_.assign(n, 0.0);
  inv_pivot_.assign(n, 0.0);
  std::vector<double> diag(n), upper(n, 0.0);
  for (int k = 0; k < n; ++k) {
    diag[k] = vol[k] / dt_s;
    if (k > 0) {
      diag[k] += conductance[k - 1];
      lower_[k] = -conductance[k - 1];
    }
    if (k + 1 < n) {
      diag[k] += conductance[k];
      upper[k] = -conductance[k];
    }
  }
  // Thomas factorisation, reused for every right-hand side.
  double pivot = diag[0];
  inv_pivot_[0] = 1.0 / pivot;
  upper_mod_[0] = upper[0] * inv_pivot_[0];
  for (int k = 1; k < n; ++k) {
    pivot = diag[k] - lower_[k] * upper_mod_[k - 1];
    inv_pivot_[k] = 1.0 / pivot;
    upper_mod_[k] = upper[k] * inv_pivot_[k];
  }

  unit_response_.assign(n, 0.0);
  unit_response_[n - 1] = grid.radius() * grid.radius();
  solve(unit_response_);
}

void ImplicitDiffusion::solve(std::span<double> x) const {
  const auto n = x.size();
  x[0] *= inv_pivot_[0];
  for (std::size_t k = 1; k < n; ++k) x[k] = (x[k] - lower_[k] * x[k - 1]) * inv_pivot_[k];
  for (std::size_t k = n - 1; k-- > 0;) x[k] -= upper_mod_[k] * x[k + 1];
}

void ImplicitDiffusion::relax(std::span<const double> conc, std::span<double> out) const {
  const auto vol = grid_->volumes();
  for (std::size_t k = 0; k < conc.size(); ++k) out[k] = vol[k] / dt_ * conc[k];
  solve(out);
}

void diffusion_step(std::span<double> conc, const RadialGrid& grid, double diffusivity_m2_s,
                    double insertion_flux, double dt_s) {
  const ImplicitDiffusion op(grid, diffusivity_m2_s, dt_s);
  std::vector<double> next(conc.size());
  op.relax(conc, next);
  const auto unit = op.unit_response();
  for (std::size_t k = 0; k < conc.size(); ++k) conc[k] = next[k] + insertion_flux * unit[k];
}

}  // namespace gridarb::spm
