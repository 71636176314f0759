#pragma once

#include "gridarb/spm/params.hpp"

namespace gridarb::spm {

/// Arrhenius temperature scaling. Rates grow with temperature for a positive
/// activation energy: ref * exp(E/R * (1/T_ref - 1/T)).
double arrhenius_scale(double ref_value, double activation_j_mol, double temperature_k,
                       double reference_temperature_k);

/// Inverts the Butler-Volmer relation
///   j = j0 * (exp(-a F eta / RT) - exp((1-a) F eta / RT))
/// for a = 0.5, where j is the insertion flux (positive = lithium entering the
/// particle) and j0 the exchange density in the same units. Returns eta in volts.
double butler_volmer_overpotential(double flux, double exchange_flux, double temperature_k);

/// Exchange density n F k c_s^a c_e^(1-a) (c_max - c_s)^(1-a), with n = 1.
/// Throws ModelFault(kKineticsStall) when c_s sits at 0 or c_max.
double exchange_flux(double surface_conc, double max_conc, double electrolyte_conc,
                     double rate_constant, double alpha);

/// Same, with the rate constant Arrhenius-scaled to `temperature_k`.
double exchange_flux(double surface_conc, const ElectrodeParams& electrode, const SpmParams& params,
                     double temperature_k);

/// Temperature-resolved SEI constants.
struct SeiRates {
  double beta3;
  double alpha;
  double diffusion_m2_s;
  double solvent_concentration_mol_m3;
};

SeiRates sei_rates(const SeiParams& sei, double temperature_k, double reference_temperature_k);

/// SEI side-reaction flux (mol/m^2/s) through a film of thickness `thickness_m`.
///
/// Kinetic and diffusive resistances act in series:
///   j_kin = beta3 / F * exp(-alpha F eta / RT)
///   j     = j_kin / (1 + j_kin * delta / (D c_solvent))
/// so a thin film grows at the kinetic rate and a thick one at D c / delta.
/// `overpotential_v` is the side reaction's own overpotential.
double sei_flux(double overpotential_v, double thickness_m, double temperature_k,
                const SeiRates& rates);

}  // namespace gridarb::spm
