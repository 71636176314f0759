#include "gridarb/spm/kinetics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "gridarb/common/errors.hpp"

namespace gridarb::spm {

double arrhenius_scale(double ref_value, double activation_j_mol, double temperature_k,
                       double reference_temperature_k) {
  if (!(temperature_k > 0) || !(reference_temperature_k > 0)) {
    throw std::invalid_argument("arrhenius_scale: temperatures must be positive");
  }
  if (temperature_k == reference_temperature_k || activation_j_mol == 0.0) return ref_value;
  return ref_value * std::exp(activation_j_mol / kGasConstant *
                              (1.0 / reference_temperature_k - 1.0 / temperature_k));
}

double butler_volmer_overpotential(double flux, double exchange_flux, double temperature_k) {
  if (!(exchange_flux > 0)) {
    throw std::invalid_argument("butler_volmer_overpotential: exchange flux must be > 0");
  }
  const double thermal_voltage = kGasConstant * temperature_k / kFaraday;
  return -2.0 * thermal_voltage * std::asinh(flux / (2.0 * exchange_flux));
}

double exchange_flux(double surface_conc, double max_conc, double electrolyte_conc,
                     double rate_constant, double alpha) {
  if (!(surface_conc > 0.0) || !(surface_conc < max_conc)) {
    throw ModelFault(FaultKind::kKineticsStall,
                     "surface concentration " + std::to_string(surface_conc) +
                         " outside (0, " + std::to_string(max_conc) + ")");
  }
  if (alpha == 0.5) {
    return kFaraday * rate_constant *
           std::sqrt(surface_conc * electrolyte_conc * (max_conc - surface_conc));
  }
  return kFaraday * rate_constant * std::pow(surface_conc, alpha) *
         std::pow(electrolyte_conc, 1.0 - alpha) * std::pow(max_conc - surface_conc, 1.0 - alpha);
}

double exchange_flux(double surface_conc, const ElectrodeParams& electrode, const SpmParams& params,
                     double temperature_k) {
  const double k = arrhenius_scale(electrode.rate_ref, electrode.activation_rate_j_mol,
                                   temperature_k, params.reference_temperature_k);
  return exchange_flux(surface_conc, electrode.max_concentration_mol_m3,
                       params.electrolyte_concentration_mol_m3, k, params.charge_transfer_alpha);
}

SeiRates sei_rates(const SeiParams& sei, double temperature_k, double reference_temperature_k) {
  return SeiRates{
      arrhenius_scale(sei.beta3, sei.activation_rate_j_mol, temperature_k, reference_temperature_k),
      sei.alpha,
      arrhenius_scale(sei.diffusion_ref_m2_s, sei.activation_diffusion_j_mol, temperature_k,
                      reference_temperature_k),
      sei.solvent_concentration_mol_m3,
  };
}

double sei_flux(double overpotential_v, double thickness_m, double temperature_k,
                const SeiRates& rates) {
  if (thickness_m < 0) throw std::invalid_argument("sei_flux: negative film thickness");
  if (rates.beta3 == 0.0) return 0.0;
  const double kinetic = rates.beta3 / kFaraday *
                         std::exp(-rates.alpha * kFaraday * overpotential_v /
                                  (kGasConstant * temperature_k));
  return kinetic /
         (1.0 + kinetic * thickness_m / (rates.diffusion_m2_s * rates.solvent_concentration_mol_m3));
}

}  // namespace gridarb::spm
