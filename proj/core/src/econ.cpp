#include "gridarb/econ.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "gridarb/common/csv.hpp"
#include "gridarb/common/errors.hpp"
#include "gridarb/common/units.hpp"

namespace gridarb::econ {

double lifetime_extrapolate(double annual_loss_pct) {
  if (!(annual_loss_pct > 0) || !std::isfinite(annual_loss_pct)) {
    throw std::invalid_argument("lifetime_extrapolate: annual loss must be positive");
  }
  return 20.0 / annual_loss_pct;
}

double lifetime_revenue(double annual_revenue_eur, double lifetime_years, double nominal_energy_wh) {
  if (!(nominal_energy_wh > 0)) throw std::invalid_argument("lifetime_revenue: energy must be > 0");
  return annual_revenue_eur * lifetime_years / (nominal_energy_wh / 1000.0);
}

double net_profit(double revenue_eur, double capacity_lost_wh, double degradation_price_eur_kwh) {
  return revenue_eur - energy_cost_eur(capacity_lost_wh, degradation_price_eur_kwh);
}

double comparison_error(double simulated, double measured) {
  if (measured == 0.0) throw std::invalid_argument("comparison_error: measured value is zero");
  return std::abs(simulated - measured) / std::abs(measured) * 100.0;
}

Histogram2D histogram_2d(std::span<const LogRow> rows, double v_bin, double p_bin) {
  if (!(v_bin > 0) || !(p_bin > 0)) throw std::invalid_argument("histogram bins must be > 0");
  Histogram2D h;
  h.v_bin = v_bin;
  h.p_bin = p_bin;
  if (rows.empty()) return h;
  const double w = 1.0 / static_cast<double>(rows.size());
  for (const LogRow& r : rows) {
    const std::pair<long, long> key{static_cast<long>(std::floor(r.voltage_v / v_bin)),
                                    static_cast<long>(std::floor(r.power_w / p_bin))};
    if (r.power_w == 0.0) {
      h.resting[key] += w;
    } else {
      h.cycling[key] += w;
    }
  }
  for (const auto& [k, v] : h.resting) h.resting_fraction += v;
  for (const auto& [k, v] : h.cycling) h.cycling_fraction += v;
  return h;
}

std::string histogram_to_csv(const Histogram2D& h) {
  std::string out = "layer,voltage_lo_v,voltage_hi_v,power_lo_w,power_hi_w,fraction\n";
  auto emit = [&](const char* layer, const std::map<std::pair<long, long>, double>& cells) {
    for (const auto& [k, v] : cells) {
      out += layer;
      out += ',' + format_double(static_cast<double>(k.first) * h.v_bin);
      out += ',' + format_double(static_cast<double>(k.first + 1) * h.v_bin);
      out += ',' + format_double(static_cast<double>(k.second) * h.p_bin);
      out += ',' + format_double(static_cast<double>(k.second + 1) * h.p_bin);
      out += ',' + format_double(v) + '\n';
    }
  };
  emit("resting", h.resting);
  emit("cycling", h.cycling);
  return out;
}

std::vector<double> heuristic_degradation_estimate(std::span<const ProfileStep> profile,
                                                   double calendar_pct_h, double cycle_pct_fec) {
  if (!(calendar_pct_h >= 0) || !(cycle_pct_fec >= 0)) {
    throw std::invalid_argument("heuristic rates must be >= 0");
  }
  std::vector<double> out;
  out.reserve(profile.size());
  double total = 0.0;
  for (const ProfileStep& s : profile) {
    if (s.resting) total += calendar_pct_h * s.soc * s.dt_h;
    total += cycle_pct_fec * s.fec;
    out.push_back(total);
  }
  return out;
}

ScenarioReport make_report(const std::string& scenario, std::span<const LogRow> rows,
                           std::span<const CheckupRecord> checkups, Seconds log_period,
                           double nominal_energy_wh, double degradation_price_eur_kwh) {
  if (rows.empty()) throw DataError(scenario + ": ledger has no rows");
  if (checkups.size() < 2) throw DataError(scenario + ": need a baseline and one check-up");
  ScenarioReport r;
  r.scenario = scenario;
  r.days = static_cast<double>(rows.size()) * static_cast<double>(log_period.count()) / 86400.0;
  r.revenue_eur = rows.back().revenue_cum_eur;
  r.fec = rows.back().fec_cum;
  const double baseline = checkups.front().capacity_wh;
  r.capacity_lost_wh = baseline - checkups.back().capacity_wh;
  r.capacity_lost_pct = r.capacity_lost_wh / baseline * 100.0;
  r.net_profit_eur = net_profit(r.revenue_eur, r.capacity_lost_wh, degradation_price_eur_kwh);
  r.cycling_fraction = histogram_2d(rows).cycling_fraction;
  if (r.capacity_lost_pct > 0) {
    const double years = r.days / 365.0;
    r.lifetime_years = lifetime_extrapolate(r.capacity_lost_pct / years);
    r.lifetime_fec = r.fec / years * r.lifetime_years;
    r.lifetime_revenue_per_kwh =
        lifetime_revenue(r.revenue_eur / years, r.lifetime_years, nominal_energy_wh);
    r.revenue_per_pct_degradation = r.revenue_eur / r.capacity_lost_pct;
    if (r.fec > 0) r.degradation_per_fec_pct = r.capacity_lost_pct / r.fec;
  }
  return r;
}

std::string meta_to_csv(const ScheduleMeta& m) {
  std::string out =
      "scenario,theta,revenue_eur,degradation_cost_eur,objective_eur,capacity_lost_wh,"
      "nominal_energy_wh,days\n";
  out += m.scenario + ',' + format_double(m.theta) + ',' + format_double(m.revenue_eur) + ',' +
         format_double(m.degradation_cost_eur) + ',' + format_double(m.objective_eur) + ',' +
         format_double(m.capacity_lost_wh) + ',' + format_double(m.nominal_energy_wh) + ',' +
         format_double(m.days) + '\n';
  return out;
}

ScheduleMeta parse_meta(const std::string& text, const std::string& source) {
  std::istringstream in(text);
  const CsvTable t = read_csv(in,
                              "scenario,theta,revenue_eur,degradation_cost_eur,objective_eur,"
                              "capacity_lost_wh,nominal_energy_wh,days",
                              source);
  if (t.rows.size() != 1 || t.rows[0].size() != 8) throw DataError(source + ": expected one row of 8 fields");
  const auto& f = t.rows[0];
  const std::string where = source + ":2";
  ScheduleMeta m;
  m.scenario = f[0];
  m.theta = parse_double(f[1], where);
  m.revenue_eur = parse_double(f[2], where);
  m.degradation_cost_eur = parse_double(f[3], where);
  m.objective_eur = parse_double(f[4], where);
  m.capacity_lost_wh = parse_double(f[5], where);
  m.nominal_energy_wh = parse_double(f[6], where);
  m.days = parse_double(f[7], where);
  return m;
}

std::string reports_to_csv(std::span<const ScenarioReport> reports) {
  std::string out =
      "scenario,days,revenue_eur,capacity_lost_wh,capacity_lost_pct,fec,net_profit_eur,"
      "lifetime_years,lifetime_fec,lifetime_revenue_eur_per_kwh,revenue_eur_per_pct,"
      "degradation_pct_per_fec,cycling_fraction\n";
  for (const auto& r : reports) {
    out += r.scenario;
    for (double v : {r.days, r.revenue_eur, r.capacity_lost_wh, r.capacity_lost_pct, r.fec,
                     r.net_profit_eur, r.lifetime_years, r.lifetime_fec, r.lifetime_revenue_per_kwh,
                     r.revenue_per_pct_degradation, r.degradation_per_fec_pct, r.cycling_fraction}) {
      out += ',' + format_double(v);
    }
    out += '\n';
  }
  return out;
}

std::string comparison_table_csv(std::span<const ScenarioReport> replayed,
                                 std::span<const std::optional<ScheduleMeta>> simulated,
                                 double degradation_price_eur_kwh) {
  if (replayed.size() != simulated.size()) {
    throw std::invalid_argument("comparison table needs one planner entry per scenario");
  }
  std::string out =
      "scenario,revenue_simulated_eur,revenue_replayed_eur,revenue_error_pct,"
      "capacity_lost_simulated_pct,capacity_lost_replayed_pct,capacity_lost_error_pct,"
      "net_profit_simulated_eur,net_profit_replayed_eur,net_profit_error_pct\n";
  auto cell = [](double v) { return std::isfinite(v) ? format_double(v) : std::string(); };
  auto err = [](double sim, double meas) {
    return meas == 0.0 ? std::numeric_limits<double>::quiet_NaN() : comparison_error(sim, meas);
  };
  for (std::size_t i = 0; i < replayed.size(); ++i) {
    const ScenarioReport& r = replayed[i];
    double rev = std::numeric_limits<double>::quiet_NaN(), lost = rev, net = rev;
    if (simulated[i]) {
      const ScheduleMeta& m = *simulated[i];
      // Scale the planner's figures to the replayed duration.
      const double scale = m.days > 0 ? r.days / m.days : 1.0;
      rev = m.revenue_eur * scale;
      lost = m.capacity_lost_wh * scale / m.nominal_energy_wh * 100.0;
      net = net_profit(rev, m.capacity_lost_wh * scale, degradation_price_eur_kwh);
    }
    out += r.scenario + ',' + cell(rev) + ',' + cell(r.revenue_eur) + ',' +
           cell(err(rev, r.revenue_eur)) + ',' + cell(lost) + ',' + cell(r.capacity_lost_pct) +
           ',' + cell(err(lost, r.capacity_lost_pct)) + ',' + cell(net) + ',' +
           cell(r.net_profit_eur) + ',' + cell(err(net, r.net_profit_eur)) + '\n';
  }
  return out;
}

}  // namespace gridarb::econ
