#pragma once

#include "gridarb/spm/params.hpp"

namespace gridarb::spm {

/// Heat generated inside the cell (W): ohmic, reaction and reversible terms.
double heat_generation_w(double current_a, double eta_n_v, double eta_p_v, double temperature_k,
                         double entropic_v_per_k, double resistance_ohm);

/// Advances the lumped cell temperature over dt with the heat source frozen:
///   rho A tau Cp dT/dt = Q - h A (T - T_env).
/// The linear cooling law is integrated exactly. Throws ModelFault(kThermalGuard)
/// when the result leaves the guard band.
double thermal_step(double temperature_k, double current_a, double eta_n_v, double eta_p_v,
                    double entropic_v_per_k, double dt_s, const SpmParams& params);

/// Time constant rho tau Cp / h of the cooling law.
double thermal_time_constant_s(const ThermalParams& thermal);

}  // namespace gridarb::spm
