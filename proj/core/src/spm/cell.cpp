#include "gridarb/spm/cell.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "gridarb/common/errors.hpp"
#include "gridarb/spm/kinetics.hpp"
#include "gridarb/spm/thermal.hpp"

namespace gridarb::spm {
namespace {

// Voltage accuracy of a constant-voltage hold.
constexpr double kHoldToleranceV = 1e-5;
constexpr int kMaxHoldIterations = 80;
constexpr int kMaxPowerIterations = 60;

double clamp_open(double c, double cmax) {
  const double eps = 1e-9 * cmax;
  return std::clamp(c, eps, cmax - eps);
}

double exchange_unchecked(double cs, double cmax, double ce, double k) {
  return kFaraday * k * std::sqrt(cs * ce * (cmax - cs));
}

}  // namespace

SpmModel::SpmModel(SpmParams params)
    : params_(std::move(params)),
      grid_n_(params_.shells, params_.negative.particle_radius_m),
      grid_p_(params_.shells, params_.positive.particle_radius_m) {
  params_.validate();
  const auto& n = params_.negative;
  const auto& p = params_.positive;
  surface_n_ = n.effective_surface_per_m * params_.electrode_area_m2 * n.thickness_m;
  surface_p_ = p.effective_surface_per_m * params_.electrode_area_m2 * p.thickness_m;
  // Solid volume fraction of spheres with surface a per volume is a R / 3.
  volume_n_ = n.effective_surface_per_m * n.particle_radius_m / 3.0 * params_.electrode_area_m2 *
              n.thickness_m;
  volume_p_ = p.effective_surface_per_m * p.particle_radius_m / 3.0 * params_.electrode_area_m2 *
              p.thickness_m;
}

SpmCellState SpmModel::fresh_state(double soc) const {
  if (!(soc >= 0.0 && soc <= 1.0)) throw std::invalid_argument("fresh_state: soc outside [0, 1]");
  const auto& n = params_.negative;
  const auto& p = params_.positive;
  const double x = n.stoich_empty + soc * (n.stoich_full - n.stoich_empty);
  const double y = p.stoich_empty + soc * (p.stoich_full - p.stoich_empty);
  SpmCellState s;
  s.conc_n.assign(static_cast<std::size_t>(params_.shells), x * n.max_concentration_mol_m3);
  s.conc_p.assign(static_cast<std::size_t>(params_.shells), y * p.max_concentration_mol_m3);
  s.temperature_k = params_.thermal.ambient_k;
  s.sei_thickness_m = params_.sei.initial_thickness_m;
  return s;
}

double SpmModel::soc_estimate(const SpmCellState& state) const {
  const auto& n = params_.negative;
  const double x = grid_n_.mean(state.conc_n) / n.max_concentration_mol_m3;
  return (x - n.stoich_empty) / (n.stoich_full - n.stoich_empty);
}

double SpmModel::open_circuit_voltage(const SpmCellState& state) const {
  const auto& n = params_.negative;
  const auto& p = params_.positive;
  const double un = n.ocv(state.conc_n.back() / n.max_concentration_mol_m3);
  const double up = p.ocv(state.conc_p.back() / p.max_concentration_mol_m3);
  const double dt = state.temperature_k - params_.reference_temperature_k;
  return up - un + params_.entropic(soc_estimate(state)) * dt;
}

double SpmModel::equilibrium_ocv(double soc) const {
  return open_circuit_voltage(fresh_state(soc));
}

double SpmModel::negative_lithium_mol(const SpmCellState& state) const {
  return grid_n_.mean(state.conc_n) * volume_n_;
}

double SpmModel::positive_lithium_mol(const SpmCellState& state) const {
  return grid_p_.mean(state.conc_p) * volume_p_;
}

SpmModel::Plan SpmModel::plan(const SpmCellState& state, double dt_s) const {
  if (!(dt_s > 0)) throw std::invalid_argument("SpmModel::plan: dt must be positive");
  const auto shells = static_cast<std::size_t>(params_.shells);
  if (state.conc_n.size() != shells || state.conc_p.size() != shells) {
    throw std::invalid_argument("SpmModel::plan: state does not match the shell count");
  }
  const auto& n = params_.negative;
  const auto& p = params_.positive;
  const double t = state.temperature_k;
  const double tref = params_.reference_temperature_k;

  Plan pl;
  pl.dt_ = dt_s;
  pl.temperature_ = t;
  pl.sei_thickness_ = state.sei_thickness_m;
  pl.capacity_lost_ = state.capacity_lost_wh;
  pl.throughput_ = state.charge_throughput_ah;
  pl.rate_n_ = arrhenius_scale(n.rate_ref, n.activation_rate_j_mol, t, tref);
  pl.rate_p_ = arrhenius_scale(p.rate_ref, p.activation_rate_j_mol, t, tref);
  pl.entropic_ = params_.entropic(soc_estimate(state));

  const double dn = arrhenius_scale(n.diffusion_ref_m2_s, n.activation_diffusion_j_mol, t, tref);
  const double dp = arrhenius_scale(p.diffusion_ref_m2_s, p.activation_diffusion_j_mol, t, tref);
  const ImplicitDiffusion op_n(grid_n_, dn, dt_s);
  const ImplicitDiffusion op_p(grid_p_, dp, dt_s);
  pl.base_n_.resize(shells);
  pl.base_p_.resize(shells);
  op_n.relax(state.conc_n, pl.base_n_);
  op_p.relax(state.conc_p, pl.base_p_);
  pl.unit_n_.assign(op_n.unit_response().begin(), op_n.unit_response().end());
  pl.unit_p_.assign(op_p.unit_response().begin(), op_p.unit_response().end());
  pl.base_surface_n_ = pl.base_n_.back();
  pl.base_surface_p_ = pl.base_p_.back();
  pl.unit_surface_n_ = pl.unit_n_.back() + grid_n_.surface_gap() / dn;
  pl.unit_surface_p_ = pl.unit_p_.back() + grid_p_.surface_gap() / dp;

  if (params_.sei.enabled) {
    const SeiRates rates = sei_rates(params_.sei, t, tref);
    pl.sei_beta3_ = rates.beta3;
    pl.sei_alpha_ = rates.alpha;
    pl.sei_diffusion_ = rates.diffusion_m2_s;
    const double cs = clamp_open(state.conc_n.back(), n.max_concentration_mol_m3);
    pl.sei_exchange_ = exchange_unchecked(cs, n.max_concentration_mol_m3,
                                          params_.electrolyte_concentration_mol_m3, pl.rate_n_);
    // The side reaction sees the negative electrode potential against Li/Li+
    // shifted by its own equilibrium potential.
    pl.sei_ocv_term_ = n.ocv(cs / n.max_concentration_mol_m3) - params_.sei.reference_potential_v;
  }
  return pl;
}

SpmModel::Surface SpmModel::surface_after(const Plan& pl, double current_a) const {
  const double jn = negative_flux(current_a);
  const double jp = positive_flux(current_a);
  double sei = 0.0;
  if (params_.sei.enabled && pl.sei_beta3_ > 0.0) {
    const double eta_pre = butler_volmer_overpotential(jn, pl.sei_exchange_, pl.temperature_);
    sei = sei_flux(eta_pre + pl.sei_ocv_term_, pl.sei_thickness_, pl.temperature_,
                   SeiRates{pl.sei_beta3_, pl.sei_alpha_, pl.sei_diffusion_,
                            params_.sei.solvent_concentration_mol_m3});
  }
  Surface s{};
  s.sei = sei;
  s.conc_n = pl.base_surface_n_ + (jn - sei) * pl.unit_surface_n_;
  s.conc_p = pl.base_surface_p_ + jp * pl.unit_surface_p_;
  return s;
}

double SpmModel::voltage_after(const Plan& pl, double current_a) const {
  const auto& n = params_.negative;
  const auto& p = params_.positive;
  const Surface s = surface_after(pl, current_a);
  const double cn = clamp_open(s.conc_n, n.max_concentration_mol_m3);
  const double cp = clamp_open(s.conc_p, p.max_concentration_mol_m3);
  const double ce = params_.electrolyte_concentration_mol_m3;
  const double eta_n =
      butler_volmer_overpotential(negative_flux(current_a),
                                  exchange_unchecked(cn, n.max_concentration_mol_m3, ce, pl.rate_n_),
                                  pl.temperature_);
  const double eta_p =
      butler_volmer_overpotential(positive_flux(current_a),
                                  exchange_unchecked(cp, p.max_concentration_mol_m3, ce, pl.rate_p_),
                                  pl.temperature_);
  const double ocv = p.ocv(cp / p.max_concentration_mol_m3) - n.ocv(cn / n.max_concentration_mol_m3) +
                     pl.entropic_ * (pl.temperature_ - params_.reference_temperature_k);
  return ocv - (eta_n - eta_p) - current_a * params_.total_resistance_ohm;
}

StepResult SpmModel::commit(const Plan& pl, double current_a) const {
  if (!std::isfinite(current_a)) throw std::invalid_argument("SpmModel::commit: current not finite");
  if (std::abs(current_a) > params_.rated_current_a * (1.0 + 1e-9)) {
    throw ModelFault(FaultKind::kCurrentLimit,
                     "current " + std::to_string(current_a) + " A above the cell rating");
  }
  const auto& n = params_.negative;
  const auto& p = params_.positive;
  const double jn = negative_flux(current_a);
  const double jp = positive_flux(current_a);
  const Surface s = surface_after(pl, current_a);
  const double bn = jn - s.sei;

  StepResult out;
  out.current_a = current_a;
  auto& st = out.state;
  const std::size_t shells = pl.base_n_.size();
  st.conc_n.resize(shells);
  st.conc_p.resize(shells);
  for (std::size_t k = 0; k < shells; ++k) {
    st.conc_n[k] = pl.base_n_[k] + bn * pl.unit_n_[k];
    st.conc_p[k] = pl.base_p_[k] + jp * pl.unit_p_[k];
    if (!(st.conc_n[k] >= 0.0 && st.conc_n[k] <= n.max_concentration_mol_m3) ||
        !(st.conc_p[k] >= 0.0 && st.conc_p[k] <= p.max_concentration_mol_m3)) {
      throw ModelFault(FaultKind::kSaturation,
                       "particle concentration left [0, c_max] in shell " + std::to_string(k));
    }
  }

  const double ce = params_.electrolyte_concentration_mol_m3;
  const double j0n = exchange_flux(s.conc_n, n.max_concentration_mol_m3, ce, pl.rate_n_,
                                   params_.charge_transfer_alpha);
  const double j0p = exchange_flux(s.conc_p, p.max_concentration_mol_m3, ce, pl.rate_p_,
                                   params_.charge_transfer_alpha);
  out.eta_n_v = butler_volmer_overpotential(jn, j0n, pl.temperature_);
  out.eta_p_v = butler_volmer_overpotential(jp, j0p, pl.temperature_);
  const double ocv = p.ocv(s.conc_p / p.max_concentration_mol_m3) -
                     n.ocv(s.conc_n / n.max_concentration_mol_m3) +
                     pl.entropic_ * (pl.temperature_ - params_.reference_temperature_k);
  out.voltage_v = ocv - (out.eta_n_v - out.eta_p_v) - current_a * params_.total_resistance_ohm;
  if (!(out.voltage_v >= params_.voltage_floor_v && out.voltage_v <= params_.voltage_ceiling_v)) {
    throw ModelFault(FaultKind::kVoltageBound,
                     "terminal voltage " + std::to_string(out.voltage_v) + " V");
  }

  // Film growth and lost capacity use the mean of the step-start and step-end
  // side-reaction rates; the boundary flux above keeps the step-start rate.
  double sei = s.sei;
  if (params_.sei.enabled && pl.sei_beta3_ > 0.0) {
    const double sei_end =
        sei_flux(out.eta_n_v + n.ocv(s.conc_n / n.max_concentration_mol_m3) -
                     params_.sei.reference_potential_v,
                 pl.sei_thickness_, pl.temperature_,
                 SeiRates{pl.sei_beta3_, pl.sei_alpha_, pl.sei_diffusion_,
                          params_.sei.solvent_concentration_mol_m3});
    sei = 0.5 * (s.sei + sei_end);
  }
  out.sei_flux = sei;

  st.temperature_k = thermal_step(pl.temperature_, current_a, out.eta_n_v, out.eta_p_v,
                                  pl.entropic_, pl.dt_, params_);
  st.sei_thickness_m = pl.sei_thickness_ + sei * params_.sei.molar_volume_m3_mol * pl.dt_;
  st.capacity_lost_wh = pl.capacity_lost_ + sei_capacity_rate_w(sei) * pl.dt_ / 3600.0;
  st.charge_throughput_ah = pl.throughput_ + std::abs(current_a) * pl.dt_ / 3600.0;
  return out;
}

StepResult SpmModel::step(const SpmCellState& state, double current_a, double dt_s) const {
  return commit(plan(state, dt_s), current_a);
}

SpmCellState SpmModel::diffusion_step(const SpmCellState& state, double flux_n, double flux_p,
                                      double dt_s) const {
  const double t = state.temperature_k;
  const double tref = params_.reference_temperature_k;
  const auto& n = params_.negative;
  const auto& p = params_.positive;
  SpmCellState out = state;
  spm::diffusion_step(out.conc_n, grid_n_,
                      arrhenius_scale(n.diffusion_ref_m2_s, n.activation_diffusion_j_mol, t, tref),
                      flux_n, dt_s);
  spm::diffusion_step(out.conc_p, grid_p_,
                      arrhenius_scale(p.diffusion_ref_m2_s, p.activation_diffusion_j_mol, t, tref),
                      flux_p, dt_s);
  for (double c : out.conc_n) {
    if (!(c >= 0.0 && c <= n.max_concentration_mol_m3)) {
      throw ModelFault(FaultKind::kSaturation, "negative particle saturated");
    }
  }
  for (double c : out.conc_p) {
    if (!(c >= 0.0 && c <= p.max_concentration_mol_m3)) {
      throw ModelFault(FaultKind::kSaturation, "positive particle saturated");
    }
  }
  return out;
}

double SpmModel::sei_capacity_rate_w(double sei_flux) const {
  return params_.nominal_voltage_v * sei_flux * kFaraday * surface_n_;
}

SpmCellState SpmModel::sei_apply(const SpmCellState& state, double sei_flux, double dt_s) const {
  if (!(dt_s >= 0)) throw std::invalid_argument("sei_apply: negative dt");
  SpmCellState out = state;
  out.capacity_lost_wh += sei_capacity_rate_w(sei_flux) * dt_s / 3600.0;
  out.sei_thickness_m += sei_flux * params_.sei.molar_volume_m3_mol * dt_s;
  return out;
}

bool SpmModel::solve_power(const Plan& pl, double power_w, double& current_a) const {
  if (power_w == 0.0) {
    current_a = 0.0;
    return true;
  }
  double i = power_w / voltage_after(pl, 0.0);
  for (int it = 0; it < kMaxPowerIterations; ++it) {
    const double v = voltage_after(pl, i);
    if (!(v > 0.5)) return false;
    const double next = power_w / v;
    if (std::abs(next - i) <= 1e-12 * std::max(1.0, std::abs(i))) {
      current_a = next;
      return true;
    }
    i = next;
  }
  return false;
}

double SpmModel::hold_current(const Plan& pl, double commanded_a, VoltageWindow window) const {
  if (commanded_a == 0.0) return 0.0;
  // f >= 0 on the admissible side of the active limit.
  const double sign = commanded_a > 0 ? 1.0 : -1.0;
  const double limit = commanded_a > 0 ? window.v_min : window.v_max;
  auto f = [&](double i) { return sign * (voltage_after(pl, i) - limit); };

  double safe = 0.0;
  double fs = f(safe);
  if (fs <= 0.0) return 0.0;
  double unsafe = commanded_a;
  double fu = f(unsafe);
  if (fu >= 0.0) return commanded_a;

  // Illinois variant of regula falsi; the admissible end is always returned.
  int side = 0;
  for (int it = 0; it < kMaxHoldIterations && fs > kHoldToleranceV; ++it) {
    double x = (safe * fu - unsafe * fs) / (fu - fs);
    if (!(std::abs(x) > std::min(std::abs(safe), std::abs(unsafe)) &&
          std::abs(x) < std::max(std::abs(safe), std::abs(unsafe)))) {
      x = 0.5 * (safe + unsafe);
    }
    const double fx = f(x);
    if (fx >= 0.0) {
      safe = x;
      fs = fx;
      if (side == 1) fu *= 0.5;
      side = 1;
    } else {
      unsafe = x;
      fu = fx;
      if (side == -1) fs *= 0.5;
      side = -1;
    }
    if (std::abs(unsafe - safe) <= 1e-13 * std::abs(commanded_a)) break;
  }
  return safe;
}

ClampedStep SpmModel::clamped(const Plan& pl, double commanded_a, VoltageWindow window,
                              bool hold) const {
  ClampedStep out;
  double current = commanded_a;
  bool limited = false;
  if (commanded_a != 0.0) {
    const double v = voltage_after(pl, commanded_a);
    const bool inside = commanded_a > 0 ? v >= window.v_min : v <= window.v_max;
    if (!inside) {
      current = hold_current(pl, commanded_a, window);
      limited = true;
    }
  }
  StepResult r = commit(pl, current);
  out.state = std::move(r.state);
  out.current_a = r.current_a;
  out.voltage_v = r.voltage_v;
  out.cv_hold = hold || limited;
  return out;
}

ClampedStep SpmModel::step_current(const SpmCellState& state, double current_a, double dt_s,
                                   VoltageWindow window, bool hold) const {
  return clamped(plan(state, dt_s), current_a, window, hold);
}

ClampedStep SpmModel::step_power(const SpmCellState& state, double power_w, double dt_s,
                                 VoltageWindow window, bool hold) const {
  const Plan pl = plan(state, dt_s);
  double current = 0.0;
  if (!solve_power(pl, power_w, current)) {
    // No current delivers the power; the fixed point only fails near the edge
    // of the window, so command the rest-voltage estimate and let the hold act.
    current = power_w / voltage_after(pl, 0.0);
  }
  current = std::clamp(current, -params_.rated_current_a, params_.rated_current_a);
  return clamped(pl, current, window, hold);
}

}  // namespace gridarb::spm
