#include "gridarb/spm/params.hpp"

#include <stdexcept>
#include <string>

namespace gridarb::spm {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument("SpmParams: " + what);
}

void validate_electrode(const ElectrodeParams& e, const std::string& name) {
  require(e.particle_radius_m > 0, name + " particle radius must be > 0");
  require(e.diffusion_ref_m2_s > 0, name + " diffusion constant must be > 0");
  require(e.rate_ref > 0, name + " rate constant must be > 0");
  require(e.activation_diffusion_j_mol >= 0 && e.activation_rate_j_mol >= 0,
          name + " activation energies must be >= 0");
  require(e.max_concentration_mol_m3 > 0, name + " max concentration must be > 0");
  require(e.effective_surface_per_m > 0, name + " effective surface must be > 0");
  require(e.thickness_m > 0, name + " thickness must be > 0");
  require(e.stoich_empty > 0 && e.stoich_empty < 1 && e.stoich_full > 0 && e.stoich_full < 1 &&
              e.stoich_empty != e.stoich_full,
          name + " stoichiometry window must lie inside (0, 1)");
  require(!e.ocv.empty(), name + " OCV table missing");
}

}  // namespace

void SpmParams::validate() const {
  validate_electrode(negative, "negative");
  validate_electrode(positive, "positive");
  require(negative.stoich_full > negative.stoich_empty,
          "negative electrode must lithiate on charge");
  require(positive.stoich_full < positive.stoich_empty,
          "positive electrode must delithiate on charge");
  require(electrode_area_m2 > 0, "electrode area must be > 0");
  require(electrolyte_concentration_mol_m3 > 0, "electrolyte concentration must be > 0");
  // The closed-form overpotential inverts the symmetric Butler-Volmer relation.
  require(charge_transfer_alpha == 0.5, "only the symmetric charge-transfer alpha 0.5 is supported");
  require(faraday > 0 && gas_constant > 0, "physical constants must be > 0");
  require(reference_temperature_k > 0, "reference temperature must be > 0");
  require(total_resistance_ohm >= 0, "resistance must be >= 0");
  require(thermal.density_kg_m3 > 0 && thermal.heat_capacity_j_kg_k > 0 &&
              thermal.convective_coeff_w_m2_k > 0 && thermal.cooling_area_m2 > 0 &&
              thermal.thickness_m > 0 && thermal.ambient_k > 0,
          "thermal constants must be > 0");
  require(sei.beta3 >= 0 && sei.alpha > 0 && sei.alpha <= 2 && sei.diffusion_ref_m2_s > 0 &&
              sei.solvent_concentration_mol_m3 > 0 && sei.molar_volume_m3_mol > 0 &&
              sei.initial_thickness_m >= 0,
          "SEI constants out of range");
  require(nominal_voltage_v > 0 && nominal_capacity_ah > 0 && nominal_energy_wh > 0 &&
              rated_current_a > 0,
          "nominal ratings must be > 0");
  require(shells >= 3, "need at least 3 radial shells");
  require(voltage_floor_v < voltage_ceiling_v, "voltage bounds inverted");

  // Full-cell OCV must rise strictly across the window.
  double previous = -1.0;
  for (int i = 0; i <= 200; ++i) {
    const double s = i / 200.0;
    const double x = negative.stoich_empty + s * (negative.stoich_full - negative.stoich_empty);
    const double y = positive.stoich_empty + s * (positive.stoich_full - positive.stoich_empty);
    const double v = positive.ocv(y) - negative.ocv(x);
    require(v > previous, "full-cell OCV must increase strictly with state of charge");
    previous = v;
  }
}

}  // namespace gridarb::spm
