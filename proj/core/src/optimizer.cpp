#include "gridarb/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "gridarb/common/csv.hpp"
#include "gridarb/common/errors.hpp"
#include "gridarb/common/units.hpp"
#include "gridarb/lp.hpp"

namespace gridarb {

namespace {
constexpr double kStepH = 1.0;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}  // namespace

void ObjectiveConfig::validate() const {
  if (!(theta >= 0.5 && theta <= 1.0)) throw std::invalid_argument("theta must lie in [0.5, 1]");
  if (!(degradation_price_eur_kwh >= 0)) {
    throw std::invalid_argument("degradation price must be >= 0");
  }
  if (horizon_h < 1 || commit_h < 1 || commit_h > horizon_h) {
    throw std::invalid_argument("need 1 <= commit_h <= horizon_h");
  }
}

ObjectiveValue combine_objective(double theta, double revenue_eur, double degradation_cost_eur) {
  return ObjectiveValue{theta * revenue_eur - (1.0 - theta) * degradation_cost_eur, revenue_eur,
                        degradation_cost_eur};
}

ObjectiveValue evaluate_objective(std::span<const double> power_w, const PriceSeries& prices,
                                  const RolloutFn& rollout, const ObjectiveConfig& config) {
  if (power_w.size() != prices.size()) {
    throw DataError("schedule has " + std::to_string(power_w.size()) + " steps but prices have " +
                    std::to_string(prices.size()));
  }
  const Rollout r = rollout(power_w);
  if (r.faulted) return ObjectiveValue{kNegInf, 0.0, 0.0};
  double revenue = 0.0;
  for (std::size_t k = 0; k < power_w.size(); ++k) {
    revenue += trade_revenue_eur(r.delivered_w[k], prices[k], kStepH);
  }
  return combine_objective(config.theta, revenue,
                           energy_cost_eur(r.capacity_lost_wh, config.degradation_price_eur_kwh));
}

RolloutFn linear_rollout(const linear::LinearCellParams& params, double initial_soc) {
  return [params, initial_soc](std::span<const double> power_w) {
    Rollout r;
    linear::LinearCellState s;
    s.soc = initial_soc;
    try {
      for (double p : power_w) {
        const double before = s.capacity_lost_wh;
        s = linear::linear_step(s, p, kStepH, params);
        r.delivered_w.push_back(p);
        r.soc.push_back(s.soc);
        r.lost_wh.push_back(s.capacity_lost_wh - before);
      }
    } catch (const ModelFault&) {
      r.faulted = true;
      return r;
    }
    const double before = s.capacity_lost_wh;
    s = linear::close_horizon(s, params);
    if (!r.lost_wh.empty()) r.lost_wh.front() += s.capacity_lost_wh - before;
    r.capacity_lost_wh = s.capacity_lost_wh;
    return r;
  };
}

bool spm_hour(const spm::SpmModel& model, spm::SpmCellState& state, double power_w,
              const SpmPlanning& planning, double& delivered_w) {
  const double p = std::clamp(power_w, -planning.power_limit_w, planning.power_limit_w);
  try {
    if (p == 0.0) {
      state = model.step_power(state, 0.0, 3600.0, planning.window, false).state;
      delivered_w = 0.0;
      return true;
    }
    const long n = std::max(1L, std::lround(3600.0 / planning.substep_s));
    const double dt = 3600.0 / static_cast<double>(n);
    bool hold = false;
    double energy_j = 0.0;
    for (long k = 0; k < n; ++k) {
      spm::ClampedStep r = model.step_power(state, p, dt, planning.window, hold);
      hold = r.cv_hold;
      energy_j += r.current_a * r.voltage_v * dt;
      state = std::move(r.state);
    }
    delivered_w = energy_j / 3600.0;
    return true;
  } catch (const ModelFault&) {
    return false;
  }
}

RolloutFn spm_rollout(const spm::SpmModel& model, spm::SpmCellState initial,
                      SpmPlanning planning) {
  return [&model, initial = std::move(initial), planning](std::span<const double> power_w) {
    Rollout r;
    spm::SpmCellState s = initial;
    for (double p : power_w) {
      const double before = s.capacity_lost_wh;
      double delivered = 0.0;
      if (!spm_hour(model, s, p, planning, delivered)) {
        r.faulted = true;
        return r;
      }
      r.delivered_w.push_back(delivered);
      r.soc.push_back(model.soc_estimate(s));
      r.lost_wh.push_back(s.capacity_lost_wh - before);
    }
    r.capacity_lost_wh = s.capacity_lost_wh - initial.capacity_lost_wh;
    return r;
  };
}

namespace {

DispatchSchedule build_schedule(const PriceSeries& prices, std::span<const double> power_w,
                                const Rollout& r, const ObjectiveConfig& config) {
  DispatchSchedule s;
  s.start = prices.start();
  s.theta = config.theta;
  s.power_w.assign(power_w.begin(), power_w.end());
  s.price_eur_mwh.assign(prices.prices().begin(), prices.prices().end());
  s.soc = r.soc;
  for (std::size_t k = 0; k < power_w.size(); ++k) {
    const double rev = trade_revenue_eur(r.delivered_w[k], prices[k], kStepH);
    s.revenue_eur.push_back(rev);
    s.degradation_eur.push_back(energy_cost_eur(r.lost_wh[k], config.degradation_price_eur_kwh));
    s.revenue += rev;
  }
  s.capacity_lost_wh = r.capacity_lost_wh;
  const ObjectiveValue v = combine_objective(
      config.theta, s.revenue, energy_cost_eur(r.capacity_lost_wh, config.degradation_price_eur_kwh));
  s.objective = v.objective;
  s.degradation_cost = v.degradation_cost;
  return s;
}

}  // namespace

DispatchSchedule optimize_linear(const PriceSeries& prices, const linear::LinearCellParams& params,
                                 const ObjectiveConfig& config, double initial_soc) {
  config.validate();
  params.validate();
  if (!(initial_soc >= params.soc_min - linear::kSocTolerance &&
        initial_soc <= params.soc_max + linear::kSocTolerance)) {
    throw InfeasibleError("initial SoC " + format_double(initial_soc) + " outside the window");
  }
  const double soc0 = std::clamp(initial_soc, params.soc_min, params.soc_max);
  const int h = static_cast<int>(prices.size());
  const double deg_per_wh = (1.0 - config.theta) * config.degradation_price_eur_kwh / 1000.0;

  lp::LinearProgram program;
  std::vector<int> charge(h), discharge(h);
  for (int t = 0; t < h; ++t) {
    const double sell = config.theta * trade_revenue_eur(1.0, prices[t], kStepH);
    const double wear = deg_per_wh * params.beta1 * kStepH;
    charge[t] = program.add_variable(-sell - wear);
    discharge[t] = program.add_variable(sell - wear);
  }
  const int peak = program.add_variable(-deg_per_wh * params.beta2_h, params.power_limit_w);
  // Cumulative energy balance, scaled to W: sum (d - c) dt <= (soc0 - soc_min) E.
  const double scale = params.nominal_energy_wh / kStepH;
  std::vector<std::pair<int, double>> terms;
  for (int t = 0; t < h; ++t) {
    terms.emplace_back(discharge[t], 1.0);
    terms.emplace_back(charge[t], -1.0);
    program.add_constraint(terms, lp::Sense::kLessEqual, (soc0 - params.soc_min) * scale);
    std::vector<std::pair<int, double>> neg = terms;
    for (auto& term : neg) term.second = -term.second;
    program.add_constraint(std::move(neg), lp::Sense::kLessEqual, (params.soc_max - soc0) * scale);
  }
  for (int t = 0; t < h; ++t) {
    program.add_constraint({{charge[t], 1.0}, {peak, -1.0}}, lp::Sense::kLessEqual, 0.0);
    program.add_constraint({{discharge[t], 1.0}, {peak, -1.0}}, lp::Sense::kLessEqual, 0.0);
  }
  const lp::Solution sol = lp::solve(program);

  // Complementarity cleanup: only the net power is kept, which never raises the
  // throughput or peak terms.
  std::vector<double> power(static_cast<std::size_t>(h));
  for (int t = 0; t < h; ++t) {
    double p = sol.x[static_cast<std::size_t>(discharge[t])] - sol.x[static_cast<std::size_t>(charge[t])];
    if (std::abs(p) < 1e-9) p = 0.0;
    if (std::abs(std::abs(p) - params.power_limit_w) < 1e-9) p = std::copysign(params.power_limit_w, p);
    power[static_cast<std::size_t>(t)] = p;
  }
  const Rollout r = linear_rollout(params, soc0)(power);
  if (r.faulted) throw InfeasibleError("linear optimum left the SoC window");
  return build_schedule(prices, power, r, config);
}

namespace {

/// Coordinate descent on SPM rollouts with cached hour-boundary states.
class Descent {
 public:
  Descent(const PriceSeries& prices, const spm::SpmModel& model, const ObjectiveConfig& config,
          const spm::SpmCellState& initial, const PbmOptions& options)
      : prices_(prices), model_(model), config_(config), options_(options),
        h_(prices.size()) {
    cur_.states.assign(h_ + 1, initial);
    cur_.delivered.assign(h_, 0.0);
    cur_.revenue.assign(h_ + 1, 0.0);
    scratch_ = cur_;
  }

  /// Objective of `x`, leaving its trajectory cached.
  double reset(const std::vector<double>& x) {
    x_ = x;
    cur_.objective = roll(cur_, 0);
    return cur_.objective;
  }

  void run() {
    if (!std::isfinite(cur_.objective)) return;
    const double limit = options_.planning.power_limit_w;
    for (double step : options_.step_levels_w) {
      for (int sweep = 0; sweep < options_.sweeps_per_level; ++sweep) {
        bool improved = false;
        for (std::size_t t = 0; t < h_; ++t) {
          const double old = x_[t];
          for (double dir : {1.0, -1.0}) {
            const double v = std::clamp(old + dir * step, -limit, limit);
            if (v == old) continue;
            x_[t] = v;
            scratch_.revenue[t] = cur_.revenue[t];
            scratch_.states[t] = cur_.states[t];
            const double f = roll(scratch_, t);
            if (f > cur_.objective) {
              for (std::size_t k = t + 1; k <= h_; ++k) std::swap(cur_.states[k], scratch_.states[k]);
              for (std::size_t k = t; k < h_; ++k) {
                cur_.delivered[k] = scratch_.delivered[k];
                cur_.revenue[k + 1] = scratch_.revenue[k + 1];
              }
              cur_.objective = f;
              improved = true;
              break;
            }
            x_[t] = old;
          }
        }
        if (!improved) break;
      }
    }
  }

  double objective() const { return cur_.objective; }
  const std::vector<double>& x() const { return x_; }

 private:
  struct Trajectory {
    std::vector<spm::SpmCellState> states;  // state at the start of each hour, plus the end
    std::vector<double> delivered;
    std::vector<double> revenue;  // running revenue before each hour
    double objective = kNegInf;
  };

  // Rolls hours [from, H) of x_ into `tr`, whose entries up to `from` are valid.
  double roll(Trajectory& tr, std::size_t from) const {
    for (std::size_t k = from; k < h_; ++k) {
      tr.states[k + 1] = tr.states[k];
      double delivered = 0.0;
      if (!spm_hour(model_, tr.states[k + 1], x_[k], options_.planning, delivered)) return kNegInf;
      tr.delivered[k] = delivered;
      tr.revenue[k + 1] = tr.revenue[k] + trade_revenue_eur(delivered, prices_[k], kStepH);
    }
    const double lost = tr.states[h_].capacity_lost_wh - tr.states[0].capacity_lost_wh;
    return combine_objective(config_.theta, tr.revenue[h_],
                             energy_cost_eur(lost, config_.degradation_price_eur_kwh))
        .objective;
  }

  const PriceSeries& prices_;
  const spm::SpmModel& model_;
  const ObjectiveConfig& config_;
  const PbmOptions& options_;
  std::size_t h_;
  std::vector<double> x_;
  Trajectory cur_;
  Trajectory scratch_;
};

}  // namespace

DispatchSchedule optimize_pbm(const PriceSeries& prices, const spm::SpmModel& model,
                              const ObjectiveConfig& config, const spm::SpmCellState& initial,
                              std::span<const double> seed, const PbmOptions& options,
                              ObjectiveValue* seed_objective) {
  config.validate();
  if (seed.size() != prices.size()) throw DataError("seed schedule and prices differ in length");
  const double limit = options.planning.power_limit_w;
  std::vector<double> x0(seed.begin(), seed.end());
  for (double& p : x0) p = std::clamp(p, -limit, limit);

  Descent from_seed(prices, model, config, initial, options);
  const double seed_value = from_seed.reset(x0);
  from_seed.run();
  std::vector<double> best = from_seed.x();
  double best_value = from_seed.objective();

  if (options.multistart_zero) {
    Descent from_zero(prices, model, config, initial, options);
    from_zero.reset(std::vector<double>(prices.size(), 0.0));
    from_zero.run();
    if (from_zero.objective() > best_value) {
      best = from_zero.x();
      best_value = from_zero.objective();
    }
  }
  if (!std::isfinite(best_value)) throw ModelFault(FaultKind::kSaturation, "no feasible profile found");

  const RolloutFn rollout = spm_rollout(model, initial, options.planning);
  if (seed_objective != nullptr) {
    *seed_objective = std::isfinite(seed_value)
                          ? evaluate_objective(std::span<const double>(x0), prices, rollout, config)
                          : ObjectiveValue{kNegInf, 0.0, 0.0};
  }
  const Rollout r = rollout(best);
  return build_schedule(prices, best, r, config);
}

namespace {

struct Segment {
  std::size_t first;
  std::size_t hours;
  std::size_t commit;
};

std::vector<Segment> plan_windows(std::size_t n, const ObjectiveConfig& config) {
  std::vector<Segment> out;
  const auto horizon = static_cast<std::size_t>(config.horizon_h);
  for (std::size_t k = 0; k < n;) {
    const std::size_t remain = n - k;
    const std::size_t hours = std::min(horizon, remain);
    const std::size_t commit = remain <= horizon ? remain : static_cast<std::size_t>(config.commit_h);
    out.push_back(Segment{k, hours, commit});
    k += commit;
  }
  return out;
}

void append_hour(DispatchSchedule& year, double power, double price, double soc, double revenue,
                 double degradation) {
  year.power_w.push_back(power);
  year.price_eur_mwh.push_back(price);
  year.soc.push_back(soc);
  year.revenue_eur.push_back(revenue);
  year.degradation_eur.push_back(degradation);
  year.revenue += revenue;
}

void finish_year(DispatchSchedule& year, const ObjectiveConfig& config) {
  const ObjectiveValue v =
      combine_objective(config.theta, year.revenue,
                        energy_cost_eur(year.capacity_lost_wh, config.degradation_price_eur_kwh));
  year.objective = v.objective;
  year.degradation_cost = v.degradation_cost;
}

// Prefixes the active error with the window while keeping its type.
[[noreturn]] void rethrow_in_window(std::size_t w, Timestamp start) {
  const std::string where = "window " + std::to_string(w) + " at " + format_timestamp(start) + ": ";
  try {
    throw;
  } catch (const ModelFault& e) {
    throw ModelFault(e.kind(), where + e.detail());
  } catch (const DataError& e) {
    throw DataError(where + e.what());
  } catch (const InfeasibleError& e) {
    throw InfeasibleError(where + e.what());
  } catch (const Error& e) {
    throw Error(where + e.what());
  }
}

}  // namespace

YearSchedule schedule_year(const PriceSeries& prices, const linear::LinearCellParams& params,
                           const ObjectiveConfig& config, double initial_soc,
                           const ProgressFn& progress) {
  config.validate();
  YearSchedule out;
  out.schedule.start = prices.start();
  out.schedule.theta = config.theta;
  linear::LinearCellState state;
  state.soc = initial_soc;
  const auto segments = plan_windows(prices.size(), config);
  for (std::size_t w = 0; w < segments.size(); ++w) {
    if (progress) progress(w, segments.size());
    const Segment& seg = segments[w];
    const PriceSeries window = prices.slice(seg.first, seg.hours);
    DispatchSchedule s;
    try {
      s = optimize_linear(window, params, config, state.soc);
    } catch (const Error&) {
      rethrow_in_window(w, window.start());
    }
    out.windows.push_back(WindowRecord{w, window.start(), static_cast<int>(seg.hours),
                                       static_cast<int>(seg.commit), s.objective, s.objective});
    const std::size_t first_row = out.schedule.size();
    for (std::size_t i = 0; i < seg.commit; ++i) {
      const double before = state.capacity_lost_wh;
      state = linear::linear_step(state, s.power_w[i], kStepH, params);
      append_hour(out.schedule, s.power_w[i], window[i], state.soc,
                  trade_revenue_eur(s.power_w[i], window[i], kStepH),
                  energy_cost_eur(state.capacity_lost_wh - before, config.degradation_price_eur_kwh));
    }
    const double before = state.capacity_lost_wh;
    state = linear::close_horizon(state, params);
    out.schedule.degradation_eur[first_row] +=
        energy_cost_eur(state.capacity_lost_wh - before, config.degradation_price_eur_kwh);
  }
  out.schedule.capacity_lost_wh = state.capacity_lost_wh;
  finish_year(out.schedule, config);
  out.linear_end = state;
  return out;
}

YearSchedule schedule_year(const PriceSeries& prices, const spm::SpmModel& model,
                           const ObjectiveConfig& config, const spm::SpmCellState& initial,
                           const PbmOptions& options, const linear::LinearCellParams& seed_params,
                           const ProgressFn& progress) {
  config.validate();
  YearSchedule out;
  out.schedule.start = prices.start();
  out.schedule.theta = config.theta;
  spm::SpmCellState state = initial;
  const auto segments = plan_windows(prices.size(), config);
  for (std::size_t w = 0; w < segments.size(); ++w) {
    if (progress) progress(w, segments.size());
    const Segment& seg = segments[w];
    const PriceSeries window = prices.slice(seg.first, seg.hours);
    const double soc0 = std::clamp(model.soc_estimate(state), seed_params.soc_min, seed_params.soc_max);
    std::vector<double> seed(seg.hours, 0.0);
    try {
      seed = optimize_linear(window, seed_params, config, soc0).power_w;
    } catch (const InfeasibleError&) {
      // keep the idle seed
    }
    ObjectiveValue seed_value;
    DispatchSchedule s;
    try {
      s = optimize_pbm(window, model, config, state, seed, options, &seed_value);
    } catch (const Error&) {
      rethrow_in_window(w, window.start());
    }
    out.windows.push_back(WindowRecord{w, window.start(), static_cast<int>(seg.hours),
                                       static_cast<int>(seg.commit), seed_value.objective,
                                       s.objective});
    for (std::size_t i = 0; i < seg.commit; ++i) {
      const double before = state.capacity_lost_wh;
      double delivered = 0.0;
      if (!spm_hour(model, state, s.power_w[i], options.planning, delivered)) {
        throw ModelFault(FaultKind::kSaturation,
                         "committed hour " + format_timestamp(window.time_of(i)) + " faulted");
      }
      append_hour(out.schedule, s.power_w[i], window[i], model.soc_estimate(state),
                  trade_revenue_eur(delivered, window[i], kStepH),
                  energy_cost_eur(state.capacity_lost_wh - before, config.degradation_price_eur_kwh));
    }
  }
  out.schedule.capacity_lost_wh = state.capacity_lost_wh - initial.capacity_lost_wh;
  finish_year(out.schedule, config);
  out.spm_end = std::move(state);
  return out;
}

std::string schedule_to_csv(const DispatchSchedule& schedule) {
  std::string out = "timestamp,power_w,price_eur_mwh,soc,objective_cum_eur\n";
  double revenue = 0.0, degradation = 0.0;
  for (std::size_t k = 0; k < schedule.size(); ++k) {
    revenue += schedule.revenue_eur.empty() ? 0.0 : schedule.revenue_eur[k];
    degradation += schedule.degradation_eur.empty() ? 0.0 : schedule.degradation_eur[k];
    out += format_timestamp(schedule.start + PriceSeries::period() * static_cast<long long>(k));
    out += ',' + format_double(schedule.power_w[k]);
    out += ',' + format_double(schedule.price_eur_mwh[k]);
    out += ',' + format_double(schedule.soc.empty() ? 0.0 : schedule.soc[k]);
    out += ',' + format_double(combine_objective(schedule.theta, revenue, degradation).objective);
    out += '\n';
  }
  return out;
}

DispatchSchedule parse_schedule(const std::string& text, const std::string& source) {
  std::istringstream in(text);
  const CsvTable table = read_csv(in, "timestamp,power_w,price_eur_mwh,soc,objective_cum_eur", source);
  if (table.rows.empty()) throw DataError(source + ": empty schedule");
  DispatchSchedule s;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    const std::string where = source + ":" + std::to_string(table.line_numbers[i]);
    if (row.size() != 5) throw DataError(where + ": expected 5 fields");
    Timestamp t;
    try {
      t = parse_timestamp(row[0]);
    } catch (const DataError& e) {
      throw DataError(where + ": " + e.what());
    }
    if (i == 0) {
      s.start = t;
    } else if (t != s.start + PriceSeries::period() * static_cast<long long>(i)) {
      throw DataError(where + ": schedule rows must be consecutive hours");
    }
    s.power_w.push_back(parse_double(row[1], where));
    s.price_eur_mwh.push_back(parse_double(row[2], where));
    s.soc.push_back(parse_double(row[3], where));
  }
  return s;
}

DispatchSchedule load_schedule(const std::filesystem::path& path) {
  return parse_schedule(read_text_file(path), path.string());
}

}  // namespace gridarb
