#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gridarb/common/time.hpp"
#include "gridarb/linear_cell.hpp"
#include "gridarb/optimizer.hpp"
#include "gridarb/spm/cell.hpp"

namespace gridarb {

/// Voltage window and sampling of the virtual battery tester.
struct TesterLimits {
  double v_min = 2.7;
  double v_max = 4.2;
  /// Current (fraction of 1C) that ends a constant-voltage phase.
  double cv_cutoff_c = 0.01;
  Seconds log_period{900};
  /// Integration step of the tester; must divide the log period.
  double substep_s = 60.0;
  void validate() const;
};

/// Monthly capacity measurement: CCCV charge, rest, CCCV discharge, rest.
struct CheckupProtocol {
  int cycles = 3;
  double rate_c = 1.0;
  double cutoff_c = 0.01;
  double rest_h = 1.0;
  /// Check-ups always use the full voltage range of the cell.
  double v_min = 2.7;
  double v_max = 4.2;
  double substep_s = 60.0;
  /// Whether check-up throughput is added to the FEC counter.
  bool count_in_fec = true;
};

/// Result of one tester step.
struct TesterStep {
  double current_a = 0.0;
  double voltage_v = 0.0;
  double power_w = 0.0;
  bool cv_hold = false;
};

/// A cell the tester can drive.
class TestCell {
 public:
  virtual ~TestCell() = default;
  virtual TesterStep apply_power(double power_w, double dt_s, spm::VoltageWindow window,
                                 bool hold) = 0;
  virtual TesterStep apply_current(double current_a, double dt_s, spm::VoltageWindow window,
                                   bool hold) = 0;
  virtual double soc() const = 0;
  virtual double temperature_k() const = 0;
  virtual double capacity_lost_wh() const = 0;
  virtual double nominal_capacity_ah() const = 0;
  virtual double nominal_energy_wh() const = 0;
  /// Cells without kinetics report their capacity instead of being cycled.
  virtual std::optional<double> direct_capacity_wh() const { return std::nullopt; }
  /// Exact text snapshot of the state, for checkpoints.
  virtual std::string save_state() const = 0;
  virtual void load_state(const std::string& text) = 0;
};

class SpmTestCell final : public TestCell {
 public:
  SpmTestCell(const spm::SpmModel& model, spm::SpmCellState state);
  TesterStep apply_power(double power_w, double dt_s, spm::VoltageWindow window, bool hold) override;
  TesterStep apply_current(double current_a, double dt_s, spm::VoltageWindow window,
                           bool hold) override;
  double soc() const override { return model_->soc_estimate(state_); }
  double temperature_k() const override { return state_.temperature_k; }
  double capacity_lost_wh() const override { return state_.capacity_lost_wh; }
  double nominal_capacity_ah() const override { return model_->params().nominal_capacity_ah; }
  double nominal_energy_wh() const override { return model_->params().nominal_energy_wh; }
  std::string save_state() const override;
  void load_state(const std::string& text) override;
  const spm::SpmCellState& state() const { return state_; }

 private:
  const spm::SpmModel* model_;
  spm::SpmCellState state_;
};

/// Energy-domain cell. Its terminal voltage is a piecewise-linear stand-in
/// through (0 %, 2.7 V), (10 %, 3.42 V), (90 %, 4.08 V), (100 %, 4.2 V), so
/// tester windows map onto the SoC window; reaching a limit stops the flow.
class LinearTestCell final : public TestCell {
 public:
  LinearTestCell(linear::LinearCellParams params, double soc, double nominal_capacity_ah = 2.7);
  TesterStep apply_power(double power_w, double dt_s, spm::VoltageWindow window, bool hold) override;
  TesterStep apply_current(double current_a, double dt_s, spm::VoltageWindow window,
                           bool hold) override;
  double soc() const override { return state_.soc; }
  double temperature_k() const override { return 298.15; }
  double capacity_lost_wh() const override { return state_.capacity_lost_wh; }
  double nominal_capacity_ah() const override { return capacity_ah_; }
  double nominal_energy_wh() const override { return params_.nominal_energy_wh; }
  std::optional<double> direct_capacity_wh() const override {
    return linear::remaining_capacity_wh(state_, params_);
  }
  std::string save_state() const override;
  void load_state(const std::string& text) override;

  static double voltage_of(double soc);
  static double soc_of(double voltage_v);
  void set_capacity_lost(double wh) { state_.capacity_lost_wh = wh; }

 private:
  linear::LinearCellParams params_;
  linear::LinearCellState state_;
  double capacity_ah_;
};

struct LogRow {
  Timestamp time{};            ///< start of the logging interval
  double power_w = 0.0;        ///< mean delivered power over the interval
  double voltage_v = 0.0;      ///< terminal voltage at the end of the interval
  double temperature_k = 0.0;
  double abs_current_a = 0.0;  ///< mean |I| over the interval
  double fec_cum = 0.0;
  double revenue_cum_eur = 0.0;
  bool cv_hold = false;        ///< a voltage limit was held during the interval
  double soc = 0.0;            ///< at the end of the interval
};

struct CheckupRecord {
  Timestamp time{};
  double capacity_wh = 0.0;
  double fec_cum = 0.0;
};

struct ExperimentLedger {
  std::vector<LogRow> rows;
  /// Measurement taken before the first scheduled hour.
  std::optional<CheckupRecord> baseline;
  std::vector<CheckupRecord> checkups;
  double fec_cum = 0.0;
  /// Part of fec_cum accumulated during check-ups.
  double checkup_fec = 0.0;
  double revenue_cum_eur = 0.0;
  /// The cell model's own degradation counter at the end of the run.
  double capacity_lost_cum_wh = 0.0;
  /// Hours of the schedule actually executed.
  std::size_t hours_done = 0;
  std::optional<Timestamp> fault_time;
  std::string fault_message;
};

/// Runs `hours` schedule hours starting at `first_hour`, appending log rows.
/// A model fault propagates; rows logged before it are kept.
void execute_clamped(TestCell& cell, const DispatchSchedule& schedule, std::size_t first_hour,
                     std::size_t hours, const TesterLimits& limits, ExperimentLedger& ledger);

struct CheckupResult {
  double capacity_wh = 0.0;
  double fec = 0.0;
};

/// Measures the capacity, then recharges the cell to its state of charge on entry.
CheckupResult run_checkup(TestCell& cell, const CheckupProtocol& protocol);

/// Append-only CSV storage of a running experiment, with a checkpoint at each
/// check-up so an interrupted run resumes where it stopped.
class ExperimentStore {
 public:
  ExperimentStore(std::filesystem::path ledger_csv, std::filesystem::path checkup_csv,
                  std::filesystem::path checkpoint);
  /// Restores ledger and cell from the checkpoint; false if there is none.
  bool resume(ExperimentLedger& ledger, TestCell& cell) const;
  void start();
  void append(const ExperimentLedger& ledger, std::size_t first_row, bool new_checkup,
              const TestCell& cell);
  /// Marks the run complete (the checkpoint is removed).
  void finish() const;

 private:
  std::filesystem::path ledger_csv_, checkup_csv_, checkpoint_;
};

struct ExperimentOptions {
  int checkup_every_days = 30;
  bool baseline_checkup = true;
};

/// Alternates clamped execution with check-ups every `checkup_every_days` and at
/// the end. Model faults end the run; the returned ledger records where.
ExperimentLedger run_experiment(TestCell& cell, const DispatchSchedule& schedule,
                                const TesterLimits& limits, const CheckupProtocol& protocol,
                                const ExperimentOptions& options = {},
                                ExperimentStore* store = nullptr);

std::string ledger_to_csv(const ExperimentLedger& ledger);
std::string checkups_to_csv(const ExperimentLedger& ledger);
std::string ledger_csv_header();
std::string ledger_csv_row(const LogRow& row);
std::string checkup_csv_row(const CheckupRecord& row);

/// Rows of a ledger CSV (current, hold flag and SoC are not stored).
std::vector<LogRow> parse_ledger(const std::string& text, const std::string& source);
std::vector<CheckupRecord> parse_checkups(const std::string& text, const std::string& source);

}  // namespace gridarb
