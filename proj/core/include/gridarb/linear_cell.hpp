#pragma once

#include <span>

namespace gridarb::linear {

/// Data-sheet battery model: energy-domain SoC with throughput and peak-power ageing.
///
/// Sign convention throughout the library: positive power discharges the cell
/// (energy is sold), negative power charges it.
struct LinearCellParams {
  double nominal_energy_wh = 10.0;
  /// Wh of capacity lost per Wh of absolute throughput. The default makes
  /// 8000 full equivalent cycles consume 20 % of the nominal capacity.
  double beta1 = 1.25e-5;
  /// Wh of capacity lost per W of peak power, charged once per horizon.
  double beta2_h = 2.12e-4;
  double power_limit_w = 10.0;
  double soc_min = 0.0;
  double soc_max = 1.0;

  /// Throws std::invalid_argument when an invariant is violated.
  void validate() const;
};

struct LinearCellState {
  double soc = 0.5;
  double capacity_lost_wh = 0.0;
  /// Largest |power| seen since the last horizon was closed.
  double peak_power_w = 0.0;
};

inline constexpr double kSocTolerance = 1e-9;

/// Advances the state by `dt_h` hours at constant `power_w`.
/// Throws ModelFault(kSocWindow) if the SoC leaves the window by more than kSocTolerance
/// and std::invalid_argument for |power| above the limit or non-positive dt.
LinearCellState linear_step(const LinearCellState& state, double power_w, double dt_h,
                            const LinearCellParams& params);

/// Charges the peak-power term for the horizon that just ended and resets the peak.
LinearCellState close_horizon(const LinearCellState& state, const LinearCellParams& params);

/// Capacity loss of a whole profile, including one peak-power charge for the profile.
double profile_capacity_loss_wh(std::span<const double> power_w, double dt_h,
                                const LinearCellParams& params);

inline double remaining_capacity_wh(const LinearCellState& s, const LinearCellParams& p) {
  return p.nominal_energy_wh - s.capacity_lost_wh;
}

}  // namespace gridarb::linear
