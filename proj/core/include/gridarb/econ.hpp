#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gridarb/replay.hpp"

namespace gridarb::econ {

/// Years until 20 % of the capacity is gone at a constant annual loss.
double lifetime_extrapolate(double annual_loss_pct);
/// Lifetime revenue per kWh of nominal capacity.
double lifetime_revenue(double annual_revenue_eur, double lifetime_years, double nominal_energy_wh);
double net_profit(double revenue_eur, double capacity_lost_wh, double degradation_price_eur_kwh);
/// |simulated - measured| / |measured| in percent.
double comparison_error(double simulated, double measured);

/// Share of logged time per (voltage, power) bin, with resting rows (P == 0)
/// kept apart from cycling rows. Bin k covers [k w, (k + 1) w).
struct Histogram2D {
  double v_bin = 0.1;
  double p_bin = 1.0;
  std::map<std::pair<long, long>, double> resting;
  std::map<std::pair<long, long>, double> cycling;
  double resting_fraction = 0.0;
  double cycling_fraction = 0.0;
};
Histogram2D histogram_2d(std::span<const LogRow> rows, double v_bin = 0.1, double p_bin = 1.0);
std::string histogram_to_csv(const Histogram2D& h);

/// One step of a profile for the rule-of-thumb degradation estimate.
struct ProfileStep {
  double dt_h = 1.0;
  double soc = 0.0;
  double fec = 0.0;  ///< full equivalent cycles done in the step
  bool resting = false;
};

/// Cumulative degradation (%) after each step: rest hours weighted linearly by
/// SoC at `calendar_pct_h` (the rate at full charge), plus `cycle_pct_fec` per FEC.
std::vector<double> heuristic_degradation_estimate(std::span<const ProfileStep> profile,
                                                   double calendar_pct_h, double cycle_pct_fec);

struct ScenarioReport {
  std::string scenario;
  double days = 0.0;
  double revenue_eur = 0.0;
  double capacity_lost_wh = 0.0;
  double capacity_lost_pct = 0.0;
  double fec = 0.0;
  double net_profit_eur = 0.0;
  /// Lifetime fields are 0 when no capacity was lost (no finite extrapolation).
  double lifetime_years = 0.0;
  double lifetime_fec = 0.0;
  double lifetime_revenue_per_kwh = 0.0;
  double revenue_per_pct_degradation = 0.0;
  double degradation_per_fec_pct = 0.0;
  double cycling_fraction = 0.0;
};

/// Metrics of a replayed experiment. Capacity loss is baseline minus last check-up.
ScenarioReport make_report(const std::string& scenario, std::span<const LogRow> rows,
                           std::span<const CheckupRecord> checkups, Seconds log_period,
                           double nominal_energy_wh, double degradation_price_eur_kwh);

/// Planner-side figures stored next to a schedule.
struct ScheduleMeta {
  std::string scenario;
  double theta = 1.0;
  double revenue_eur = 0.0;
  double degradation_cost_eur = 0.0;
  double objective_eur = 0.0;
  double capacity_lost_wh = 0.0;
  double nominal_energy_wh = 10.0;
  double days = 0.0;
};
std::string meta_to_csv(const ScheduleMeta& meta);
ScheduleMeta parse_meta(const std::string& text, const std::string& source);

std::string reports_to_csv(std::span<const ScenarioReport> reports);
/// Simulated (planner) against replayed outcomes, shaped like a results table.
std::string comparison_table_csv(std::span<const ScenarioReport> replayed,
                                 std::span<const std::optional<ScheduleMeta>> simulated,
                                 double degradation_price_eur_kwh);

}  // namespace gridarb::econ
