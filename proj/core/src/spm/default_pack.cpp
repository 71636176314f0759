#include <iterator>
#include <vector>

#include "gridarb/spm/params.hpp"

namespace gridarb::spm {
namespace {

#include "ocv_tables.inc"

template <std::size_t N>
OcvCurve curve(const OcvPoint (&table)[N]) {
  return OcvCurve(std::vector<OcvPoint>(std::begin(table), std::end(table)));
}

}  // namespace

// Cylindrical 10 Wh NMC811/graphite cell. Windows and area are calibrated so a
// 1C CCCV check-up between 2.7 V and 4.2 V delivers the nominal 10 Wh. The SEI
// prefactor gives a calendar fade of 4.2e-4 %/h at full charge and the negative
// rate constant about 6.7e-3 % per full 1C cycle.
SpmParams SpmParams::defaults() {
  SpmParams p;

  auto& n = p.negative;
  n.particle_radius_m = 12.5e-6;
  n.diffusion_ref_m2_s = 1.5e-13;
  n.rate_ref = 7.15e-17;
  n.activation_diffusion_j_mol = 30000.0;
  n.activation_rate_j_mol = 35000.0;
  n.max_concentration_mol_m3 = 30555.0;
  n.effective_surface_per_m = 126700.0;
  n.thickness_m = 71.7e-6;
  n.stoich_empty = 0.03678;
  n.stoich_full = 0.9014;
  n.ocv = curve(kGraphiteOcv);

  auto& c = p.positive;
  c.particle_radius_m = 8.5e-6;
  c.diffusion_ref_m2_s = 1e-13;
  c.rate_ref = 4e-16;
  c.activation_diffusion_j_mol = 25000.0;
  c.activation_rate_j_mol = 17800.0;
  c.max_concentration_mol_m3 = 51385.0;
  c.effective_surface_per_m = 158300.0;
  c.thickness_m = 68.3e-6;
  c.stoich_empty = 0.89961;
  c.stoich_full = 0.26385;
  c.ocv = curve(kNmcOcv);

  p.electrode_area_m2 = 0.1025;
  p.total_resistance_ohm = 0.008;

  p.sei.enabled = true;
  p.sei.beta3 = 7.5888e-11;
  p.sei.alpha = 1.0;
  p.sei.diffusion_ref_m2_s = 3e-18;
  p.sei.activation_diffusion_j_mol = 20000.0;
  p.sei.activation_rate_j_mol = 30000.0;
  return p;
}

}  // namespace gridarb::spm
