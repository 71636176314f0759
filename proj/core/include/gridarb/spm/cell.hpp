#pragma once

#include <vector>

#include "gridarb/spm/diffusion.hpp"
#include "gridarb/spm/params.hpp"

namespace gridarb::spm {

/// Physical state of one cell. Current is positive on discharge.
struct SpmCellState {
  std::vector<double> conc_n;  ///< shell concentrations, negative particle (mol/m^3)
  std::vector<double> conc_p;  ///< shell concentrations, positive particle (mol/m^3)
  double temperature_k = 298.15;
  double sei_thickness_m = 0.0;
  double capacity_lost_wh = 0.0;
  double charge_throughput_ah = 0.0;
};

struct VoltageWindow {
  double v_min;
  double v_max;
};

/// Outcome of one coupled step.
struct StepResult {
  SpmCellState state;
  double current_a = 0.0;
  double voltage_v = 0.0;
  double eta_n_v = 0.0;
  double eta_p_v = 0.0;
  double sei_flux = 0.0;
};

/// Outcome of a step executed the way a battery tester would: the commanded
/// power or current is followed until a voltage limit is met, after which the
/// limit is held.
struct ClampedStep {
  SpmCellState state;
  double current_a = 0.0;
  double voltage_v = 0.0;
  bool cv_hold = false;
};

/// Single particle model with lumped thermal balance and SEI growth.
///
/// The model is immutable; every operation maps a state value to a new one, so
/// a single model may be shared by any number of threads.
class SpmModel {
 public:
  /// Precomputed pieces of one step from one state. Within a step the
  /// post-step surface concentrations are affine in the applied current,
  /// which makes voltage evaluation for trial currents cheap.
  class Plan {
   public:
    double dt_s() const { return dt_; }

   private:
    friend class SpmModel;
    double dt_ = 0.0;
    double temperature_ = 0.0;
    double sei_thickness_ = 0.0;
    double capacity_lost_ = 0.0;
    double throughput_ = 0.0;
    double rate_n_ = 0.0, rate_p_ = 0.0;
    double entropic_ = 0.0;
    double sei_ocv_term_ = 0.0;
    double sei_exchange_ = 0.0;
    double sei_beta3_ = 0.0, sei_alpha_ = 0.0, sei_diffusion_ = 0.0;
    std::vector<double> base_n_, base_p_;
    std::vector<double> unit_n_, unit_p_;
    double base_surface_n_ = 0.0, base_surface_p_ = 0.0;
    double unit_surface_n_ = 0.0, unit_surface_p_ = 0.0;
  };

  explicit SpmModel(SpmParams params);

  const SpmParams& params() const { return params_; }
  const RadialGrid& grid_n() const { return grid_n_; }
  const RadialGrid& grid_p() const { return grid_p_; }

  /// Relaxed cell at the given state of charge, ambient temperature, fresh SEI.
  SpmCellState fresh_state(double soc) const;

  /// Affine map of the mean negative stoichiometry onto [0, 1] through its window.
  double soc_estimate(const SpmCellState& state) const;
  /// Open-circuit voltage from the current surface concentrations.
  double open_circuit_voltage(const SpmCellState& state) const;
  /// Equilibrium OCV of a relaxed fresh cell at `soc`.
  double equilibrium_ocv(double soc) const;

  /// Lithium held in the particles of one electrode (mol).
  double negative_lithium_mol(const SpmCellState& state) const;
  double positive_lithium_mol(const SpmCellState& state) const;
  double total_lithium_mol(const SpmCellState& state) const {
    return negative_lithium_mol(state) + positive_lithium_mol(state);
  }

  /// Insertion fluxes (mol/m^2/s, positive into the particle) carried by a cell current.
  double negative_flux(double current_a) const { return -current_a / (kFaraday * surface_n_); }
  double positive_flux(double current_a) const { return current_a / (kFaraday * surface_p_); }
  /// Reactive particle surface of each electrode (m^2).
  double negative_surface_m2() const { return surface_n_; }
  double positive_surface_m2() const { return surface_p_; }

  Plan plan(const SpmCellState& state, double dt_s) const;
  /// Terminal voltage at the end of the planned step for a trial current.
  /// Never throws; concentrations outside the particle are saturated.
  double voltage_after(const Plan& plan, double current_a) const;
  /// Completes the planned step. Throws ModelFault on saturation, kinetic stall,
  /// thermal guard, hard voltage bounds or a current above the rating.
  StepResult commit(const Plan& plan, double current_a) const;

  /// One coupled step at constant current.
  StepResult step(const SpmCellState& state, double current_a, double dt_s) const;

  /// Solid diffusion only, with explicit insertion fluxes.
  SpmCellState diffusion_step(const SpmCellState& state, double flux_n, double flux_p,
                              double dt_s) const;
  /// Applies an SEI flux held for dt: lost capacity and film growth.
  SpmCellState sei_apply(const SpmCellState& state, double sei_flux, double dt_s) const;
  /// Capacity fade rate (W, i.e. Wh per hour) equivalent to an SEI flux.
  double sei_capacity_rate_w(double sei_flux) const;

  /// Follows `power_w` (positive = discharge) and switches to a constant-voltage
  /// hold at the window edge. With `hold` set, the hold is already latched.
  ClampedStep step_power(const SpmCellState& state, double power_w, double dt_s,
                         VoltageWindow window, bool hold) const;
  /// Same for a commanded current.
  ClampedStep step_current(const SpmCellState& state, double current_a, double dt_s,
                           VoltageWindow window, bool hold) const;

  /// Current delivering `power_w` over the planned step, if one exists.
  bool solve_power(const Plan& plan, double power_w, double& current_a) const;

 private:
  struct Surface {
    double conc_n, conc_p, eta_n, eta_p, sei;
  };
  Surface surface_after(const Plan& plan, double current_a) const;
  double hold_current(const Plan& plan, double commanded_a, VoltageWindow window) const;
  ClampedStep clamped(const Plan& plan, double commanded_a, VoltageWindow window,
                      bool hold) const;

  SpmParams params_;
  RadialGrid grid_n_;
  RadialGrid grid_p_;
  double surface_n_;
  double surface_p_;
  double volume_n_;
  double volume_p_;
};

}  // namespace gridarb::spm
