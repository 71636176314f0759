#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gridarb/config.hpp"
#include "gridarb/econ.hpp"
#include "gridarb/market.hpp"
#include "gridarb/optimizer.hpp"
#include "gridarb/replay.hpp"

namespace gridarb::study {

/// Calendar fade at full charge and cycle fade used by the rule-of-thumb estimate (%).
inline constexpr double kCalendarPctPerHour = 4.2e-4;
inline constexpr double kCyclePctPerFec = 6.7e-3;

/// Output tree: schedules/, ledgers/, reports/, figures/.
struct Layout {
  std::filesystem::path root;

  std::filesystem::path schedules() const { return root / "schedules"; }
  std::filesystem::path ledgers() const { return root / "ledgers"; }
  std::filesystem::path reports() const { return root / "reports"; }
  std::filesystem::path figures() const { return root / "figures"; }

  std::filesystem::path prices_csv() const { return root / "prices.csv"; }
  std::filesystem::path schedule_csv(const std::string& id) const { return schedules() / (id + ".csv"); }
  std::filesystem::path meta_csv(const std::string& id) const { return schedules() / (id + "_meta.csv"); }
  std::filesystem::path windows_csv(const std::string& id) const {
    return schedules() / (id + "_windows.csv");
  }
  std::filesystem::path ledger_csv(const std::string& id) const { return ledgers() / (id + "_ledger.csv"); }
  std::filesystem::path checkup_csv(const std::string& id) const {
    return ledgers() / (id + "_checkups.csv");
  }
  std::filesystem::path checkpoint(const std::string& id) const { return ledgers() / (id + ".checkpoint"); }
};

/// The configured price file cut to `days`, or the synthetic market.
PriceSeries study_prices(const StudyConfig& config);

YearSchedule plan_scenario(const StudyConfig& config, const Scenario& scenario,
                           const PriceSeries& prices, const ProgressFn& progress = {});

/// Replays a schedule on a fresh physics-based test cell.
ExperimentLedger replay_scenario(const StudyConfig& config, const Scenario& scenario,
                                 const DispatchSchedule& schedule, ExperimentStore* store = nullptr);

std::string windows_to_csv(const std::vector<WindowRecord>& windows);
econ::ScheduleMeta schedule_meta(const Scenario& scenario, const YearSchedule& year,
                                 double nominal_energy_wh);

/// Rest-hour SoC read back from the logged voltage through the cell's OCV curve.
double soc_from_rest_voltage(const spm::SpmModel& model, double voltage_v);

/// Daily trace of the rule-of-thumb estimate: day,fec_cum,calendar_pct,cycle_pct,total_pct.
std::string heuristic_csv(const spm::SpmModel& model, const std::vector<LogRow>& rows,
                          Seconds log_period);
/// timestamp,days,fec_cum,capacity_wh,capacity_pct. FEC at a check-up is the
/// last logged value before it.
std::string capacity_curve_csv(const std::vector<LogRow>& rows,
                               const std::vector<CheckupRecord>& checkups, Timestamp start);
/// Cumulative revenue at the end of each day.
std::string revenue_curve_csv(const std::vector<LogRow>& rows, Seconds log_period, Timestamp start);
/// Two significant figures for presentation.
std::string comparison_table_markdown(const std::vector<econ::ScenarioReport>& replayed,
                                      const std::vector<std::optional<econ::ScheduleMeta>>& simulated,
                                      double degradation_price_eur_kwh);

/// Reads every scenario with a ledger under `layout` and writes reports/ and
/// figures/. Only files are read, so the output is a pure function of them.
std::vector<econ::ScenarioReport> write_reports(const StudyConfig& config, const Layout& layout);

}  // namespace gridarb::study
