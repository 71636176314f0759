#include "gridarb/study.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include "gridarb/common/csv.hpp"
#include "gridarb/common/errors.hpp"
#include "gridarb/common/time.hpp"

namespace gridarb::study {
namespace {

double days_since(Timestamp start, Timestamp t) { return hours_between(start, t) / 24.0; }

// Rounds to two significant figures and prints without exponent.
std::string two_sig(double v) {
  if (!std::isfinite(v)) return "n/a";
  if (v == 0.0) return "0";
  const int magnitude = static_cast<int>(std::floor(std::log10(std::abs(v))));
  const double scale = std::pow(10.0, 1 - magnitude);
  const double rounded = std::round(v * scale) / scale;
  std::ostringstream s;
  s << std::fixed << std::setprecision(std::max(0, 1 - magnitude)) << rounded;
  return s.str();
}

}  // namespace

PriceSeries study_prices(const StudyConfig& config) {
  if (!config.prices_csv) return synthesize_prices(config.seed, config.days, config.market);
  const PriceSeries all = load_prices(*config.prices_csv);
  const std::size_t hours = static_cast<std::size_t>(config.days) * 24;
  if (all.size() < hours) {
    throw DataError(config.prices_csv->string() + ": " + std::to_string(all.size()) +
                    " hours, fewer than the " + std::to_string(config.days) + " days requested");
  }
  return all.slice(0, hours);
}

YearSchedule plan_scenario(const StudyConfig& config, const Scenario& scenario,
                           const PriceSeries& prices, const ProgressFn& progress) {
  if (scenario.planner == Planner::kLinear) {
    return schedule_year(prices, scenario.linear, scenario.objective, config.initial_soc, progress);
  }
  const spm::SpmModel model(config.spm);
  return schedule_year(prices, model, scenario.objective, model.fresh_state(config.initial_soc),
                       config.pbm, scenario.linear, progress);
}

ExperimentLedger replay_scenario(const StudyConfig& config, const Scenario& scenario,
                                 const DispatchSchedule& schedule, ExperimentStore* store) {
  const spm::SpmModel model(config.spm);
  SpmTestCell cell(model, model.fresh_state(config.initial_soc));
  return run_experiment(cell, schedule, scenario.tester, config.checkup, config.experiment, store);
}

std::string windows_to_csv(const std::vector<WindowRecord>& windows) {
  std::string out = "index,start,hours,committed_h,seed_objective_eur,objective_eur\n";
  for (const WindowRecord& w : windows) {
    out += std::to_string(w.index) + ',' + format_timestamp(w.start) + ',' +
           std::to_string(w.hours) + ',' + std::to_string(w.committed_h) + ',' +
           format_double(w.seed_objective) + ',' + format_double(w.objective) + '\n';
  }
  return out;
}

econ::ScheduleMeta schedule_meta(const Scenario& scenario, const YearSchedule& year,
                                 double nominal_energy_wh) {
  econ::ScheduleMeta m;
  m.scenario = scenario.id;
  m.theta = year.schedule.theta;
  m.revenue_eur = year.schedule.revenue;
  m.degradation_cost_eur = year.schedule.degradation_cost;
  m.objective_eur = year.schedule.objective;
  m.capacity_lost_wh = year.schedule.capacity_lost_wh;
  m.nominal_energy_wh = nominal_energy_wh;
  m.days = static_cast<double>(year.schedule.size()) / 24.0;
  return m;
}

double soc_from_rest_voltage(const spm::SpmModel& model, double voltage_v) {
  double lo = 0.0, hi = 1.0;
  if (voltage_v <= model.equilibrium_ocv(lo)) return lo;
  if (voltage_v >= model.equilibrium_ocv(hi)) return hi;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    (model.equilibrium_ocv(mid) < voltage_v ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::string heuristic_csv(const spm::SpmModel& model, const std::vector<LogRow>& rows,
                          Seconds log_period) {
  const double dt_h = static_cast<double>(log_period.count()) / 3600.0;
  std::vector<econ::ProfileStep> profile;
  profile.reserve(rows.size());
  const double energy_wh = model.params().nominal_energy_wh;
  for (const LogRow& r : rows) {
    econ::ProfileStep s;
    s.dt_h = dt_h;
    s.resting = r.power_w == 0.0;
    s.soc = s.resting ? soc_from_rest_voltage(model, r.voltage_v) : 0.0;
    // Energy-domain cycles; the logged counter also holds check-up throughput.
    s.fec = std::abs(r.power_w) * dt_h / (2.0 * energy_wh);
    profile.push_back(s);
  }
  const auto calendar = econ::heuristic_degradation_estimate(profile, kCalendarPctPerHour, 0.0);
  const auto cycle = econ::heuristic_degradation_estimate(profile, 0.0, kCyclePctPerFec);
  const std::size_t per_day = static_cast<std::size_t>(24.0 / dt_h + 0.5);
  std::string out = "day,profile_fec_cum,calendar_pct,cycle_pct,total_pct\n";
  for (std::size_t end = per_day; end <= profile.size(); end += per_day) {
    const std::size_t i = end - 1;
    const double fec = cycle[i] / kCyclePctPerFec;
    out += std::to_string(end / per_day) + ',' + format_double(fec) + ',' + format_double(calendar[i]) +
           ',' + format_double(cycle[i]) + ',' + format_double(calendar[i] + cycle[i]) + '\n';
  }
  return out;
}

std::string capacity_curve_csv(const std::vector<LogRow>& rows,
                               const std::vector<CheckupRecord>& checkups, Timestamp start) {
  std::string out = "timestamp,days,fec_cum,capacity_wh,capacity_pct\n";
  if (checkups.empty()) return out;
  const double baseline = checkups.front().capacity_wh;
  std::size_t next = 0;
  double fec = 0.0;
  for (const CheckupRecord& c : checkups) {
    while (next < rows.size() && rows[next].time < c.time) fec = rows[next++].fec_cum;
    out += format_timestamp(c.time) + ',' + format_double(days_since(start, c.time)) + ',' +
           format_double(fec) + ',' + format_double(c.capacity_wh) + ',' +
           format_double(c.capacity_wh / baseline * 100.0) + '\n';
  }
  return out;
}

std::string revenue_curve_csv(const std::vector<LogRow>& rows, Seconds log_period, Timestamp start) {
  std::string out = "timestamp,days,revenue_cum_eur\n";
  const long long per_day = 86400 / log_period.count();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if ((static_cast<long long>(i) + 1) % per_day != 0) continue;
    const Timestamp end = rows[i].time + log_period;
    out += format_timestamp(end) + ',' + format_double(days_since(start, end)) + ',' +
           format_double(rows[i].revenue_cum_eur) + '\n';
  }
  return out;
}

std::string comparison_table_markdown(const std::vector<econ::ScenarioReport>& replayed,
                                      const std::vector<std::optional<econ::ScheduleMeta>>& simulated,
                                      double degradation_price_eur_kwh) {
  std::string out =
      "| scenario | revenue sim (EUR) | revenue replay (EUR) | loss sim (%) | loss replay (%) | "
      "net profit sim (EUR) | net profit replay (EUR) |\n"
      "|---|---|---|---|---|---|---|\n";
  for (std::size_t i = 0; i < replayed.size(); ++i) {
    const econ::ScenarioReport& r = replayed[i];
    std::string rev = "n/a", loss = "n/a", net = "n/a";
    if (simulated[i]) {
      const econ::ScheduleMeta& m = *simulated[i];
      const double scale = m.days > 0 ? r.days / m.days : 1.0;
      rev = two_sig(m.revenue_eur * scale);
      loss = two_sig(m.capacity_lost_wh * scale / m.nominal_energy_wh * 100.0);
      net = two_sig(econ::net_profit(m.revenue_eur * scale, m.capacity_lost_wh * scale,
                                     degradation_price_eur_kwh));
    }
    out += "| " + r.scenario + " | " + rev + " | " + two_sig(r.revenue_eur) + " | " + loss + " | " +
           two_sig(r.capacity_lost_pct) + " | " + net + " | " + two_sig(r.net_profit_eur) + " |\n";
  }
  return out;
}

std::vector<econ::ScenarioReport> write_reports(const StudyConfig& config, const Layout& layout) {
  std::filesystem::create_directories(layout.reports());
  std::filesystem::create_directories(layout.figures());
  const spm::SpmModel model(config.spm);
  const double price = config.objective.degradation_price_eur_kwh;

  std::vector<econ::ScenarioReport> reports;
  std::vector<std::optional<econ::ScheduleMeta>> metas;
  std::string lifetime =
      "scenario,capacity_lost_pct,revenue_eur,revenue_eur_per_pct,lifetime_years,lifetime_fec,"
      "lifetime_revenue_eur_per_kwh\n";
  for (const Scenario& s : config.scenarios) {
    const auto ledger_path = layout.ledger_csv(s.id);
    if (!std::filesystem::exists(ledger_path)) continue;
    const auto rows = parse_ledger(read_text_file(ledger_path), ledger_path.string());
    const auto checkup_path = layout.checkup_csv(s.id);
    const auto checkups = parse_checkups(read_text_file(checkup_path), checkup_path.string());
    const econ::ScenarioReport r = econ::make_report(
        s.id, rows, checkups, config.tester.log_period, config.spm.nominal_energy_wh, price);
    reports.push_back(r);

    std::optional<econ::ScheduleMeta> meta;
    const auto meta_path = layout.meta_csv(s.id);
    if (std::filesystem::exists(meta_path)) {
      meta = econ::parse_meta(read_text_file(meta_path), meta_path.string());
    }
    metas.push_back(meta);

    const Timestamp start = rows.front().time;
    write_text_file(layout.figures() / ("histogram_" + s.id + ".csv"),
                    econ::histogram_to_csv(econ::histogram_2d(rows)));
    write_text_file(layout.figures() / ("capacity_" + s.id + ".csv"),
                    capacity_curve_csv(rows, checkups, start));
    write_text_file(layout.figures() / ("revenue_" + s.id + ".csv"),
                    revenue_curve_csv(rows, config.tester.log_period, start));
    write_text_file(layout.figures() / ("heuristic_" + s.id + ".csv"),
                    heuristic_csv(model, rows, config.tester.log_period));
    lifetime += s.id + ',' + format_double(r.capacity_lost_pct) + ',' + format_double(r.revenue_eur) +
                ',' + format_double(r.revenue_per_pct_degradation) + ',' +
                format_double(r.lifetime_years) + ',' + format_double(r.lifetime_fec) + ',' +
                format_double(r.lifetime_revenue_per_kwh) + '\n';
  }
  if (reports.empty()) throw DataError("no ledgers under " + layout.ledgers().string());
  write_text_file(layout.figures() / "lifetime.csv", lifetime);
  write_text_file(layout.reports() / "summary.csv", econ::reports_to_csv(reports));
  write_text_file(layout.reports() / "comparison.csv",
                  econ::comparison_table_csv(reports, metas, price));
  write_text_file(layout.reports() / "comparison.md", comparison_table_markdown(reports, metas, price));
  return reports;
}

}  // namespace gridarb::study
