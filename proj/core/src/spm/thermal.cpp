#include "gridarb/spm/thermal.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "gridarb/common/errors.hpp"

namespace gridarb::spm {

double heat_generation_w(double current_a, double eta_n_v, double eta_p_v, double temperature_k,
                         double entropic_v_per_k, double resistance_ohm) {
  return current_a * current_a * resistance_ohm + current_a * (eta_n_v - eta_p_v) +
         current_a * temperature_k * entropic_v_per_k;
}

double thermal_time_constant_s(const ThermalParams& t) {
  return t.density_kg_m3 * t.thickness_m * t.heat_capacity_j_kg_k / t.convective_coeff_w_m2_k;
}

double thermal_step(double temperature_k, double current_a, double eta_n_v, double eta_p_v,
                    double entropic_v_per_k, double dt_s, const SpmParams& params) {
  if (!(dt_s > 0)) throw std::invalid_argument("thermal_step: dt must be positive");
  const auto& t = params.thermal;
  const double heat = heat_generation_w(current_a, eta_n_v, eta_p_v, temperature_k,
                                        entropic_v_per_k, params.total_resistance_ohm);
  const double conductance = t.convective_coeff_w_m2_k * t.cooling_area_m2;
  const double steady = t.ambient_k + heat / conductance;
  const double decay = std::exp(-dt_s / thermal_time_constant_s(t));
  const double next = steady + (temperature_k - steady) * decay;
  if (!(next >= params.temperature_floor_k && next <= params.temperature_ceiling_k)) {
    throw ModelFault(FaultKind::kThermalGuard, "temperature " + std::to_string(next) + " K");
  }
  return next;
}

}  // namespace gridarb::spm
