// Prints the calibration targets of an SPM parameter pack: 1C capacity,
// check-up energy, calendar fade at full charge and fade per full 1C cycle.
// Overrides: key=value with keys beta3, alpha_sei, d_sei, k_n, k_p, d_n, d_p,
// r_tot, area, x0, x100, y0, y100.
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <string>

#include "gridarb/replay.hpp"
#include "gridarb/spm/cell.hpp"

using namespace gridarb;

namespace {

void apply(spm::SpmParams& p, const std::string& key, double v) {
  if (key == "beta3") p.sei.beta3 = v;
  else if (key == "alpha_sei") p.sei.alpha = v;
  else if (key == "d_sei") p.sei.diffusion_ref_m2_s = v;
  else if (key == "u_sei") p.sei.reference_potential_v = v;
  else if (key == "fit_beta3") {
  } else if (key == "k_n") p.negative.rate_ref = v;
  else if (key == "k_p") p.positive.rate_ref = v;
  else if (key == "d_n") p.negative.diffusion_ref_m2_s = v;
  else if (key == "d_p") p.positive.diffusion_ref_m2_s = v;
  else if (key == "r_tot") p.total_resistance_ohm = v;
  else if (key == "area") p.electrode_area_m2 = v;
  else if (key == "x0") p.negative.stoich_empty = v;
  else if (key == "x100") p.negative.stoich_full = v;
  else if (key == "y0") p.positive.stoich_empty = v;
  else if (key == "y100") p.positive.stoich_full = v;
  else {
    std::fprintf(stderr, "unknown key %s\n", key.c_str());
    std::exit(1);
  }
}

double cc_discharge_ah(const spm::SpmModel& m) {
  auto s = m.fresh_state(1.0);
  double ah = 0.0;
  const double i = m.params().nominal_capacity_ah;
  for (int k = 0; k < 100000; ++k) {
    auto p = m.plan(s, 1.0);
    if (m.voltage_after(p, i) < 2.7) break;
    auto r = m.commit(p, i);
    ah += i / 3600.0;
    s = std::move(r.state);
  }
  return ah;
}

double fade_pct(const spm::SpmModel& m, double before, double after) {
  return (after - before) / m.params().nominal_energy_wh * 100.0;
}

double calendar_rate(const spm::SpmParams& p, double soc) {
  const spm::SpmModel m(p);
  auto s = m.fresh_state(soc);
  for (int h = 0; h < 720; ++h) s = m.step(s, 0.0, 3600.0).state;
  return fade_pct(m, 0, s.capacity_lost_wh) / 720;
}

// Log-space bisection of beta3 onto the calendar target at full charge.
double fit_beta3(spm::SpmParams p, double target_pct_h) {
  double lo = 1e-24, hi = 1e-3;
  for (int it = 0; it < 80; ++it) {
    const double mid = std::sqrt(lo * hi);
    p.sei.beta3 = mid;
    (calendar_rate(p, 1.0) < target_pct_h ? lo : hi) = mid;
  }
  return std::sqrt(lo * hi);
}

}  // namespace

int main(int argc, char** argv) {
  spm::SpmParams params = spm::SpmParams::defaults();
  for (int a = 1; a < argc; ++a) {
    const std::string arg = argv[a];
    const auto eq = arg.find('=');
    if (eq == std::string::npos) {
      std::fprintf(stderr, "usage: spm_calibrate [key=value ...]\n");
      return 1;
    }
    apply(params, arg.substr(0, eq), std::stod(arg.substr(eq + 1)));
  }

  bool fit = false;
  for (int a = 1; a < argc; ++a) fit = fit || std::string(argv[a]).rfind("fit_beta3", 0) == 0;
  if (fit) {
    params.sei.beta3 = fit_beta3(params, 4.2e-4);
    std::printf("beta3=%.6e\n", params.sei.beta3);
  }

  spm::SpmParams no_sei = params;
  no_sei.sei.enabled = false;
  const spm::SpmModel fresh(no_sei);
  std::printf("ocv(0)=%.4f ocv(0.1)=%.4f ocv(0.5)=%.4f ocv(0.9)=%.4f ocv(1)=%.4f\n",
              fresh.equilibrium_ocv(0.0), fresh.equilibrium_ocv(0.1), fresh.equilibrium_ocv(0.5),
              fresh.equilibrium_ocv(0.9), fresh.equilibrium_ocv(1.0));
  std::printf("1C CC discharge: %.4f Ah\n", cc_discharge_ah(fresh));

  const spm::SpmModel model(params);
  {
    SpmTestCell cell(model, model.fresh_state(0.5));
    const CheckupResult r = run_checkup(cell, CheckupProtocol{});
    std::printf("check-up: %.4f Wh, %.3f FEC, fade %.2e %%\n", r.capacity_wh, r.fec,
                fade_pct(model, 0.0, cell.capacity_lost_wh()));
  }
  for (double soc : {1.0, 0.9, 0.5, 0.1, 0.0}) {
    std::printf("rest 30 d at %3.0f%%: %.3e %%/h\n", soc * 100, calendar_rate(params, soc));
  }
  for (double c : {1.0, 0.5, 0.25}) {
    SpmTestCell cell(model, model.fresh_state(0.0));
    const spm::VoltageWindow w{2.7, 4.2};
    const double i = c * 2.7;
    double hours = 0;
    for (int cyc = 0; cyc < 10; ++cyc) {
      bool hold = false;
      for (int k = 0; k < 100000; ++k) {
        auto r = cell.apply_current(-i, 60, w, hold);
        hold = hold || r.cv_hold;
        hours += 60 / 3600.0;
        if (hold) break;
      }
      hold = false;
      for (int k = 0; k < 100000; ++k) {
        auto r = cell.apply_current(i, 60, w, hold);
        hold = hold || r.cv_hold;
        hours += 60 / 3600.0;
        if (hold) break;
      }
    }
    std::printf("%.2fC CC cycles: %.3e %%/cycle (%.1f h per cycle)\n", c,
                fade_pct(model, 0, cell.capacity_lost_wh()) / 10, hours / 10);
  }
  return 0;
}
