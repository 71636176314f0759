#include "gridarb/replay.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "gridarb/common/csv.hpp"
#include "gridarb/common/errors.hpp"
#include "gridarb/common/units.hpp"

namespace gridarb {

void TesterLimits::validate() const {
  if (!(v_min >= 2.0 && v_min < v_max && v_max <= 4.5)) {
    throw std::invalid_argument("tester limits need 2.0 <= v_min < v_max <= 4.5");
  }
  if (!(cv_cutoff_c > 0)) throw std::invalid_argument("cv cutoff must be > 0");
  if (log_period.count() <= 0 || 3600 % log_period.count() != 0) {
    throw std::invalid_argument("log period must divide one hour");
  }
  const double per_log = static_cast<double>(log_period.count()) / substep_s;
  if (!(substep_s > 0) || per_log != std::floor(per_log)) {
    throw std::invalid_argument("tester substep must divide the log period");
  }
}

namespace {

std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ' ';
    out += format_double(v[i]);
  }
  return out;
}

std::vector<double> split_doubles(const std::string& text, const std::string& context) {
  std::vector<double> out;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) out.push_back(parse_double(tok, context));
  return out;
}

std::map<std::string, std::string> parse_keys(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    out[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return out;
}

const std::string& need(const std::map<std::string, std::string>& keys, const std::string& key) {
  const auto it = keys.find(key);
  if (it == keys.end()) throw DataError("checkpoint is missing '" + key + "'");
  return it->second;
}

TesterStep to_tester(const spm::ClampedStep& r) {
  return TesterStep{r.current_a, r.voltage_v, r.current_a * r.voltage_v, r.cv_hold};
}

}  // namespace

SpmTestCell::SpmTestCell(const spm::SpmModel& model, spm::SpmCellState state)
    : model_(&model), state_(std::move(state)) {}

TesterStep SpmTestCell::apply_power(double power_w, double dt_s, spm::VoltageWindow window,
                                    bool hold) {
  spm::ClampedStep r = model_->step_power(state_, power_w, dt_s, window, hold);
  const TesterStep out = to_tester(r);
  state_ = std::move(r.state);
  return out;
}

TesterStep SpmTestCell::apply_current(double current_a, double dt_s, spm::VoltageWindow window,
                                      bool hold) {
  spm::ClampedStep r = model_->step_current(state_, current_a, dt_s, window, hold);
  const TesterStep out = to_tester(r);
  state_ = std::move(r.state);
  return out;
}

std::string SpmTestCell::save_state() const {
  std::string out;
  out += "conc_n=" + join(state_.conc_n) + '\n';
  out += "conc_p=" + join(state_.conc_p) + '\n';
  out += "temperature_k=" + format_double(state_.temperature_k) + '\n';
  out += "sei_thickness_m=" + format_double(state_.sei_thickness_m) + '\n';
  out += "capacity_lost_wh=" + format_double(state_.capacity_lost_wh) + '\n';
  out += "charge_throughput_ah=" + format_double(state_.charge_throughput_ah) + '\n';
  return out;
}

void SpmTestCell::load_state(const std::string& text) {
  const auto keys = parse_keys(text);
  spm::SpmCellState s;
  s.conc_n = split_doubles(need(keys, "conc_n"), "checkpoint conc_n");
  s.conc_p = split_doubles(need(keys, "conc_p"), "checkpoint conc_p");
  const auto shells = static_cast<std::size_t>(model_->params().shells);
  if (s.conc_n.size() != shells || s.conc_p.size() != shells) {
    throw DataError("checkpoint shell count does not match the model");
  }
  s.temperature_k = parse_double(need(keys, "temperature_k"), "checkpoint");
  s.sei_thickness_m = parse_double(need(keys, "sei_thickness_m"), "checkpoint");
  s.capacity_lost_wh = parse_double(need(keys, "capacity_lost_wh"), "checkpoint");
  s.charge_throughput_ah = parse_double(need(keys, "charge_throughput_ah"), "checkpoint");
  state_ = std::move(s);
}

namespace {
constexpr double kProxySoc[] = {0.0, 0.1, 0.9, 1.0};
constexpr double kProxyVolt[] = {2.7, 3.42, 4.08, 4.2};
}  // namespace

LinearTestCell::LinearTestCell(linear::LinearCellParams params, double soc,
                               double nominal_capacity_ah)
    : params_(params), capacity_ah_(nominal_capacity_ah) {
  params_.validate();
  state_.soc = soc;
}

double LinearTestCell::voltage_of(double soc) {
  const double s = std::clamp(soc, 0.0, 1.0);
  for (int i = 1; i < 4; ++i) {
    if (s <= kProxySoc[i]) {
      const double w = (s - kProxySoc[i - 1]) / (kProxySoc[i] - kProxySoc[i - 1]);
      return kProxyVolt[i - 1] + w * (kProxyVolt[i] - kProxyVolt[i - 1]);
    }
  }
  return kProxyVolt[3];
}

double LinearTestCell::soc_of(double voltage_v) {
  const double v = std::clamp(voltage_v, kProxyVolt[0], kProxyVolt[3]);
  for (int i = 1; i < 4; ++i) {
    if (v <= kProxyVolt[i]) {
      const double w = (v - kProxyVolt[i - 1]) / (kProxyVolt[i] - kProxyVolt[i - 1]);
      return kProxySoc[i - 1] + w * (kProxySoc[i] - kProxySoc[i - 1]);
    }
  }
  return 1.0;
}

TesterStep LinearTestCell::apply_power(double power_w, double dt_s, spm::VoltageWindow window,
                                       bool hold) {
  const double e = params_.nominal_energy_wh;
  const double lo = std::max(params_.soc_min, soc_of(window.v_min));
  const double hi = std::min(params_.soc_max, soc_of(window.v_max));
  const double wanted = power_w * dt_s / 3600.0;
  double energy = wanted;
  if (power_w > 0) {
    energy = std::min(wanted, std::max(0.0, (state_.soc - lo) * e));
  } else if (power_w < 0) {
    energy = std::max(wanted, -std::max(0.0, (hi - state_.soc) * e));
  }
  const double p = energy * 3600.0 / dt_s;
  // Throughput ageing only; the peak-power term belongs to planning horizons.
  state_ = linear::linear_step(state_, p, dt_s / 3600.0, params_);
  state_.peak_power_w = 0.0;
  TesterStep out;
  out.power_w = p;
  out.current_a = p * capacity_ah_ / e;
  out.voltage_v = voltage_of(state_.soc);
  out.cv_hold = hold || energy != wanted;
  return out;
}

TesterStep LinearTestCell::apply_current(double current_a, double dt_s, spm::VoltageWindow window,
                                         bool hold) {
  return apply_power(current_a * params_.nominal_energy_wh / capacity_ah_, dt_s, window, hold);
}

std::string LinearTestCell::save_state() const {
  return "soc=" + format_double(state_.soc) + "\ncapacity_lost_wh=" +
         format_double(state_.capacity_lost_wh) + '\n';
}

void LinearTestCell::load_state(const std::string& text) {
  const auto keys = parse_keys(text);
  state_.soc = parse_double(need(keys, "soc"), "checkpoint soc");
  state_.capacity_lost_wh = parse_double(need(keys, "capacity_lost_wh"), "checkpoint");
  state_.peak_power_w = 0.0;
}

void execute_clamped(TestCell& cell, const DispatchSchedule& schedule, std::size_t first_hour,
                     std::size_t hours, const TesterLimits& limits, ExperimentLedger& ledger) {
  limits.validate();
  if (first_hour + hours > schedule.size()) throw DataError("execution runs past the schedule");
  const spm::VoltageWindow window{limits.v_min, limits.v_max};
  const long long period_s = limits.log_period.count();
  const int logs_per_hour = static_cast<int>(3600 / period_s);
  const int subs_per_log = static_cast<int>(std::lround(static_cast<double>(period_s) / limits.substep_s));
  const double dt = limits.substep_s;
  const double period_h = static_cast<double>(period_s) / 3600.0;
  const double fec_per_as = 1.0 / (3600.0 * 2.0 * cell.nominal_capacity_ah());

  for (std::size_t h = first_hour; h < first_hour + hours; ++h) {
    const double power = schedule.power_w[h];
    const double price = schedule.price_eur_mwh[h];
    const Timestamp hour_start = schedule.start + Seconds(3600) * static_cast<long long>(h);
    bool hold = false;
    for (int l = 0; l < logs_per_hour; ++l) {
      double energy_j = 0.0, charge_as = 0.0;
      bool held = false;
      TesterStep r;
      for (int k = 0; k < subs_per_log; ++k) {
        r = cell.apply_power(power, dt, window, hold);
        hold = hold || r.cv_hold;
        held = held || r.cv_hold;
        energy_j += r.power_w * dt;
        charge_as += std::abs(r.current_a) * dt;
        ledger.fec_cum += std::abs(r.current_a) * dt * fec_per_as;
      }
      LogRow row;
      row.time = hour_start + Seconds(period_s) * l;
      row.power_w = energy_j / static_cast<double>(period_s);
      row.voltage_v = r.voltage_v;
      row.temperature_k = cell.temperature_k();
      row.abs_current_a = charge_as / static_cast<double>(period_s);
      ledger.revenue_cum_eur += trade_revenue_eur(row.power_w, price, period_h);
      row.fec_cum = ledger.fec_cum;
      row.revenue_cum_eur = ledger.revenue_cum_eur;
      row.cv_hold = held;
      row.soc = cell.soc();
      ledger.rows.push_back(row);
    }
    ledger.hours_done = h + 1;
  }
  ledger.capacity_lost_cum_wh = cell.capacity_lost_wh();
}

CheckupResult run_checkup(TestCell& cell, const CheckupProtocol& protocol) {
  if (const auto direct = cell.direct_capacity_wh()) return CheckupResult{*direct, 0.0};
  if (protocol.cycles < 1) throw std::invalid_argument("check-up needs at least one cycle");
  const double q = cell.nominal_capacity_ah();
  const double i1 = protocol.rate_c * q;
  const double cutoff = protocol.cutoff_c * q;
  const double dt = protocol.substep_s;
  const spm::VoltageWindow window{protocol.v_min, protocol.v_max};
  const double fec_per_as = 1.0 / (3600.0 * 2.0 * q);
  const double start_soc = cell.soc();
  CheckupResult out;
  // A CC-CV phase that ends below the cutoff current, or after 10 h at most.
  const int max_steps = static_cast<int>(10.0 * 3600.0 / dt);

  auto cccv = [&](double current) {
    bool hold = false;
    double energy_j = 0.0;
    for (int k = 0; k < max_steps; ++k) {
      const TesterStep r = cell.apply_current(current, dt, window, hold);
      hold = hold || r.cv_hold;
      energy_j += r.power_w * dt;
      out.fec += std::abs(r.current_a) * dt * fec_per_as;
      if (hold && std::abs(r.current_a) < cutoff) break;
    }
    return energy_j / 3600.0;
  };
  auto rest = [&] {
    const int steps = static_cast<int>(std::lround(protocol.rest_h * 3600.0 / dt));
    for (int k = 0; k < steps; ++k) cell.apply_current(0.0, dt, window, false);
  };

  double discharged = 0.0;
  for (int c = 0; c < protocol.cycles; ++c) {
    cccv(-i1);
    rest();
    discharged += cccv(i1);
    rest();
  }
  out.capacity_wh = discharged / protocol.cycles;

  // Back to the state of charge the cell had before the measurement.
  double step = dt;
  double last_gain = 0.0;
  for (int k = 0; k < max_steps && cell.soc() < start_soc; ++k) {
    const double need = start_soc - cell.soc();
    if (last_gain > 0 && need < last_gain) step = dt * need / last_gain;
    const double before = cell.soc();
    const TesterStep r = cell.apply_current(-i1, step, window, false);
    out.fec += std::abs(r.current_a) * step * fec_per_as;
    last_gain = (cell.soc() - before) * dt / step;
    if (r.cv_hold || step < dt) break;
  }
  rest();
  return out;
}

std::string ledger_csv_header() {
  return "timestamp,power_w,voltage_v,temperature_k,fec_cum,revenue_cum_eur\n";
}

std::string ledger_csv_row(const LogRow& r) {
  return format_timestamp(r.time) + ',' + format_double(r.power_w) + ',' +
         format_double(r.voltage_v) + ',' + format_double(r.temperature_k) + ',' +
         format_double(r.fec_cum) + ',' + format_double(r.revenue_cum_eur) + '\n';
}

std::string checkup_csv_row(const CheckupRecord& r) {
  return format_timestamp(r.time) + ',' + format_double(r.capacity_wh) + '\n';
}

std::string ledger_to_csv(const ExperimentLedger& ledger) {
  std::string out = ledger_csv_header();
  for (const auto& r : ledger.rows) out += ledger_csv_row(r);
  return out;
}

std::string checkups_to_csv(const ExperimentLedger& ledger) {
  std::string out = "timestamp,capacity_wh\n";
  if (ledger.baseline) out += checkup_csv_row(*ledger.baseline);
  for (const auto& c : ledger.checkups) out += checkup_csv_row(c);
  return out;
}

std::vector<LogRow> parse_ledger(const std::string& text, const std::string& source) {
  std::istringstream in(text);
  const CsvTable t = read_csv(in, "timestamp,power_w,voltage_v,temperature_k,fec_cum,revenue_cum_eur",
                              source);
  std::vector<LogRow> rows;
  rows.reserve(t.rows.size());
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& f = t.rows[i];
    const std::string where = source + ":" + std::to_string(t.line_numbers[i]);
    if (f.size() != 6) throw DataError(where + ": expected 6 fields");
    LogRow r;
    try {
      r.time = parse_timestamp(f[0]);
    } catch (const DataError& e) {
      throw DataError(where + ": " + e.what());
    }
    r.power_w = parse_double(f[1], where);
    r.voltage_v = parse_double(f[2], where);
    r.temperature_k = parse_double(f[3], where);
    r.fec_cum = parse_double(f[4], where);
    r.revenue_cum_eur = parse_double(f[5], where);
    rows.push_back(r);
  }
  return rows;
}

std::vector<CheckupRecord> parse_checkups(const std::string& text, const std::string& source) {
  std::istringstream in(text);
  const CsvTable t = read_csv(in, "timestamp,capacity_wh", source);
  std::vector<CheckupRecord> out;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& f = t.rows[i];
    const std::string where = source + ":" + std::to_string(t.line_numbers[i]);
    if (f.size() != 2) throw DataError(where + ": expected 2 fields");
    CheckupRecord c;
    try {
      c.time = parse_timestamp(f[0]);
    } catch (const DataError& e) {
      throw DataError(where + ": " + e.what());
    }
    c.capacity_wh = parse_double(f[1], where);
    out.push_back(c);
  }
  return out;
}

ExperimentStore::ExperimentStore(std::filesystem::path ledger_csv,
                                 std::filesystem::path checkup_csv,
                                 std::filesystem::path checkpoint)
    : ledger_csv_(std::move(ledger_csv)),
      checkup_csv_(std::move(checkup_csv)),
      checkpoint_(std::move(checkpoint)) {}

void ExperimentStore::start() {
  std::filesystem::remove(checkpoint_);
  write_text_file(ledger_csv_, ledger_csv_header());
  write_text_file(checkup_csv_, "timestamp,capacity_wh\n");
}

namespace {
void append_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::app);
  out << text;
  if (!out) throw DataError("cannot append to " + path.string());
}
}  // namespace

void ExperimentStore::append(const ExperimentLedger& ledger, std::size_t first_row,
                             bool new_checkup, const TestCell& cell) {
  std::string rows;
  for (std::size_t i = first_row; i < ledger.rows.size(); ++i) rows += ledger_csv_row(ledger.rows[i]);
  append_text(ledger_csv_, rows);
  if (!new_checkup) return;
  const CheckupRecord& c = ledger.checkups.empty() ? *ledger.baseline : ledger.checkups.back();
  append_text(checkup_csv_, checkup_csv_row(c));

  std::string cp;
  cp += "hours_done=" + std::to_string(ledger.hours_done) + '\n';
  cp += "rows=" + std::to_string(ledger.rows.size()) + '\n';
  cp += "checkups=" + std::to_string(ledger.checkups.size()) + '\n';
  cp += "baseline=" + std::string(ledger.baseline ? "1" : "0") + '\n';
  cp += "fec_cum=" + format_double(ledger.fec_cum) + '\n';
  cp += "checkup_fec=" + format_double(ledger.checkup_fec) + '\n';
  cp += "revenue_cum_eur=" + format_double(ledger.revenue_cum_eur) + '\n';
  cp += cell.save_state();
  const auto tmp = std::filesystem::path(checkpoint_.string() + ".tmp");
  write_text_file(tmp, cp);
  std::filesystem::rename(tmp, checkpoint_);
}

bool ExperimentStore::resume(ExperimentLedger& ledger, TestCell& cell) const {
  if (!std::filesystem::exists(checkpoint_)) return false;
  const std::string cp = read_text_file(checkpoint_);
  const auto keys = parse_keys(cp);
  const auto rows = static_cast<std::size_t>(parse_integer(need(keys, "rows"), "checkpoint rows"));
  const auto checkups =
      static_cast<std::size_t>(parse_integer(need(keys, "checkups"), "checkpoint checkups"));
  const bool baseline = need(keys, "baseline") == "1";

  auto logged = parse_ledger(read_text_file(ledger_csv_), ledger_csv_.string());
  auto measured = parse_checkups(read_text_file(checkup_csv_), checkup_csv_.string());
  const std::size_t measured_rows = checkups + (baseline ? 1 : 0);
  if (logged.size() < rows || measured.size() < measured_rows) {
    throw DataError("ledger files are shorter than the checkpoint");
  }
  logged.resize(rows);
  measured.resize(measured_rows);

  ExperimentLedger l;
  l.rows = std::move(logged);
  std::size_t next = 0;
  if (baseline) l.baseline = measured[next++];
  for (; next < measured.size(); ++next) l.checkups.push_back(measured[next]);
  l.hours_done = static_cast<std::size_t>(parse_integer(need(keys, "hours_done"), "checkpoint"));
  l.fec_cum = parse_double(need(keys, "fec_cum"), "checkpoint");
  l.checkup_fec = parse_double(need(keys, "checkup_fec"), "checkpoint");
  l.revenue_cum_eur = parse_double(need(keys, "revenue_cum_eur"), "checkpoint");
  cell.load_state(cp);
  l.capacity_lost_cum_wh = cell.capacity_lost_wh();

  // Rewrite the files without anything logged after the checkpoint.
  write_text_file(ledger_csv_, ledger_to_csv(l));
  write_text_file(checkup_csv_, checkups_to_csv(l));
  ledger = std::move(l);
  return true;
}

void ExperimentStore::finish() const { std::filesystem::remove(checkpoint_); }

ExperimentLedger run_experiment(TestCell& cell, const DispatchSchedule& schedule,
                                const TesterLimits& limits, const CheckupProtocol& protocol,
                                const ExperimentOptions& options, ExperimentStore* store) {
  limits.validate();
  if (options.checkup_every_days < 1) throw std::invalid_argument("check-up interval must be >= 1 day");
  ExperimentLedger ledger;
  const bool resumed = store != nullptr && store->resume(ledger, cell);
  if (store != nullptr && !resumed) store->start();

  auto checkup = [&](Timestamp t, bool baseline) {
    const CheckupResult r = run_checkup(cell, protocol);
    if (protocol.count_in_fec) {
      ledger.fec_cum += r.fec;
      ledger.checkup_fec += r.fec;
    }
    const CheckupRecord rec{t, r.capacity_wh, ledger.fec_cum};
    if (baseline) {
      ledger.baseline = rec;
    } else {
      ledger.checkups.push_back(rec);
    }
  };
  auto hour_time = [&](std::size_t h) {
    return schedule.start + Seconds(3600) * static_cast<long long>(h);
  };

  try {
    if (!resumed && options.baseline_checkup) {
      checkup(schedule.start, true);
      if (store != nullptr) store->append(ledger, 0, true, cell);
    }
    const std::size_t block = static_cast<std::size_t>(options.checkup_every_days) * 24;
    while (ledger.hours_done < schedule.size()) {
      const std::size_t next = std::min(schedule.size(), (ledger.hours_done / block + 1) * block);
      const std::size_t first_row = ledger.rows.size();
      try {
        execute_clamped(cell, schedule, ledger.hours_done, next - ledger.hours_done, limits, ledger);
      } catch (const ModelFault&) {
        if (store != nullptr) store->append(ledger, first_row, false, cell);
        throw;
      }
      checkup(hour_time(next), false);
      if (store != nullptr) store->append(ledger, first_row, true, cell);
    }
  } catch (const ModelFault& e) {
    ledger.fault_time = hour_time(ledger.hours_done);
    ledger.fault_message = e.what();
    ledger.capacity_lost_cum_wh = cell.capacity_lost_wh();
    return ledger;
  }
  ledger.capacity_lost_cum_wh = cell.capacity_lost_wh();
  if (store != nullptr) store->finish();
  return ledger;
}

}  // namespace gridarb
