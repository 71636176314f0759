#pragma once

namespace gridarb {

/// Revenue in EUR of selling `power_w` for `dt_h` hours at `price_eur_mwh`.
/// Positive power is a discharge (sale); negative power buys energy.
constexpr double trade_revenue_eur(double power_w, double price_eur_mwh, double dt_h) {
  return power_w * price_eur_mwh * dt_h * 1e-6;
}

/// EUR value of `energy_wh` at a price quoted in EUR/kWh.
constexpr double energy_cost_eur(double energy_wh, double price_eur_kwh) {
  return energy_wh / 1000.0 * price_eur_kwh;
}

}  // namespace gridarb
