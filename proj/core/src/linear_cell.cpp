#include "gridarb/linear_cell.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "gridarb/common/errors.hpp"

namespace gridarb::linear {

void LinearCellParams::validate() const {
  if (!(nominal_energy_wh > 0.0)) throw std::invalid_argument("nominal_energy_wh must be > 0");
  if (!(beta1 >= 0.0)) throw std::invalid_argument("beta1 must be >= 0");
  if (!(beta2_h >= 0.0)) throw std::invalid_argument("beta2_h must be >= 0");
  if (!(power_limit_w > 0.0)) throw std::invalid_argument("power_limit_w must be > 0");
  if (!(soc_min >= 0.0 && soc_min < soc_max && soc_max <= 1.0)) {
    throw std::invalid_argument("need 0 <= soc_min < soc_max <= 1");
  }
}

LinearCellState linear_step(const LinearCellState& state, double power_w, double dt_h,
                            const LinearCellParams& params) {
  if (!(dt_h > 0.0)) throw std::invalid_argument("linear_step: dt must be positive");
  const double magnitude = std::abs(power_w);
  if (magnitude > params.power_limit_w * (1.0 + 1e-12)) {
    throw std::invalid_argument("linear_step: |power| above the power limit");
  }
  LinearCellState next = state;
  next.soc = state.soc - power_w * dt_h / params.nominal_energy_wh;
  if (next.soc < params.soc_min - kSocTolerance || next.soc > params.soc_max + kSocTolerance) {
    throw ModelFault(FaultKind::kSocWindow, "soc " + std::to_string(next.soc) + " outside [" +
                                                std::to_string(params.soc_min) + ", " +
                                                std::to_string(params.soc_max) + "]");
  }
  next.soc = std::clamp(next.soc, params.soc_min, params.soc_max);
  next.capacity_lost_wh = state.capacity_lost_wh + params.beta1 * magnitude * dt_h;
  next.peak_power_w = std::max(state.peak_power_w, magnitude);
  return next;
}

LinearCellState close_horizon(const LinearCellState& state, const LinearCellParams& params) {
  LinearCellState next = state;
  next.capacity_lost_wh += params.beta2_h * state.peak_power_w;
  next.peak_power_w = 0.0;
  return next;
}

double profile_capacity_loss_wh(std::span<const double> power_w, double dt_h,
                                const LinearCellParams& params) {
  double throughput = 0.0;
  double peak = 0.0;
  for (double p : power_w) {
    throughput += std::abs(p) * dt_h;
    peak = std::max(peak, std::abs(p));
  }
  return params.beta1 * throughput + params.beta2_h * peak;
}

}  // namespace gridarb::linear
