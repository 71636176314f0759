#pragma once

#include "gridarb/spm/ocv.hpp"

namespace gridarb::spm {

inline constexpr double kFaraday = 96485.33212;     // C/mol
inline constexpr double kGasConstant = 8.314462618;  // J/(mol K)

struct ElectrodeParams {
  double particle_radius_m = 0.0;
  double diffusion_ref_m2_s = 0.0;
  /// Reaction rate constant at the reference temperature, scaled so the
  /// exchange density comes out as a molar flux.
  double rate_ref = 0.0;
  double activation_diffusion_j_mol = 0.0;
  double activation_rate_j_mol = 0.0;
  double max_concentration_mol_m3 = 0.0;
  /// Active surface per unit electrode volume (1/m).
  double effective_surface_per_m = 0.0;
  double thickness_m = 0.0;
  /// Particle stoichiometry at 0 % and 100 % state of charge.
  double stoich_empty = 0.0;
  double stoich_full = 0.0;
  OcvCurve ocv;
};

/// Lumped heat balance of the whole cell.
struct ThermalParams {
  double density_kg_m3 = 1626.0;
  double heat_capacity_j_kg_k = 750.0;
  double convective_coeff_w_m2_k = 10.0;
  double cooling_area_m2 = 0.0125;
  double thickness_m = 0.0052;
  double ambient_k = 298.15;
};

/// Diffusion and kinetically limited SEI growth on the negative particle.
struct SeiParams {
  bool enabled = true;
  /// Kinetic prefactor (A/m^2).
  double beta3 = 0.0;
  double alpha = 0.5;
  double diffusion_ref_m2_s = 0.0;
  double activation_diffusion_j_mol = 0.0;
  double activation_rate_j_mol = 0.0;
  double solvent_concentration_mol_m3 = 4541.0;
  double molar_volume_m3_mol = 9.585e-5;
  /// Equilibrium potential of the side reaction against Li/Li+.
  double reference_potential_v = 0.4;
  double initial_thickness_m = 5e-9;
};

struct SpmParams {
  ElectrodeParams negative;
  ElectrodeParams positive;
  double electrode_area_m2 = 0.0;
  double electrolyte_concentration_mol_m3 = 1000.0;
  double charge_transfer_alpha = 0.5;
  double faraday = kFaraday;
  double gas_constant = kGasConstant;
  double reference_temperature_k = 298.15;
  double total_resistance_ohm = 0.0;
  ThermalParams thermal;
  SeiParams sei;
  EntropicTable entropic;

  double nominal_voltage_v = 3.7;
  double nominal_capacity_ah = 2.7;
  double nominal_energy_wh = 10.0;
  double rated_current_a = 5.4;
  int shells = 30;

  /// Hard voltage bounds; leaving them is a cell fault.
  double voltage_floor_v = 2.0;
  double voltage_ceiling_v = 4.5;
  /// Thermal-runaway guard band.
  double temperature_floor_k = 250.0;
  double temperature_ceiling_k = 350.0;

  /// Throws std::invalid_argument naming the violated invariant.
  void validate() const;

  /// The calibrated 10 Wh NMC/graphite pack shipped with the library.
  static SpmParams defaults();
};

}  // namespace gridarb::spm
