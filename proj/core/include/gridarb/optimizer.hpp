#pragma once

#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "gridarb/common/time.hpp"
#include "gridarb/linear_cell.hpp"
#include "gridarb/market.hpp"
#include "gridarb/spm/cell.hpp"

namespace gridarb {

/// Weighted revenue/degradation objective of the dispatch problem.
struct ObjectiveConfig {
  /// 1 maximises revenue only; 0.5 weighs revenue and degradation cost equally.
  double theta = 1.0;
  double degradation_price_eur_kwh = 330.0;
  int horizon_h = 48;
  /// Hours of each window that are committed before the horizon recedes.
  int commit_h = 24;
  void validate() const;
};

struct ObjectiveValue {
  double objective = 0.0;
  double revenue = 0.0;
  double degradation_cost = 0.0;
};

/// theta * revenue - (1 - theta) * degradation_cost.
ObjectiveValue combine_objective(double theta, double revenue_eur, double degradation_cost_eur);

/// Hourly power setpoints with their economic outcome.
struct DispatchSchedule {
  Timestamp start{};
  std::vector<double> power_w;          ///< commanded, positive = discharge
  std::vector<double> price_eur_mwh;
  std::vector<double> soc;              ///< model state of charge at the end of each hour
  std::vector<double> revenue_eur;      ///< per hour
  std::vector<double> degradation_eur;  ///< per hour
  double theta = 1.0;
  double objective = 0.0;
  double revenue = 0.0;
  double degradation_cost = 0.0;
  double capacity_lost_wh = 0.0;

  std::size_t size() const { return power_w.size(); }
};

/// What a cell model does with a power profile of hourly steps.
struct Rollout {
  std::vector<double> delivered_w;  ///< mean power actually exchanged in each hour
  std::vector<double> soc;          ///< state of charge at the end of each hour
  std::vector<double> lost_wh;      ///< capacity lost in each hour
  double capacity_lost_wh = 0.0;    ///< total, including per-profile charges
  bool faulted = false;
};
using RolloutFn = std::function<Rollout(std::span<const double> power_w)>;

/// Revenue on delivered power and degradation cost of the capacity the model loses.
/// Throws DataError if the profile and prices differ in length; a faulted rollout
/// evaluates to -infinity.
ObjectiveValue evaluate_objective(std::span<const double> power_w, const PriceSeries& prices,
                                  const RolloutFn& rollout, const ObjectiveConfig& config);

/// The data-sheet model, charging the peak-power term once for the profile.
RolloutFn linear_rollout(const linear::LinearCellParams& params, double initial_soc);

/// How the physics-based planner executes a profile on its own model.
struct SpmPlanning {
  spm::VoltageWindow window{2.7, 4.2};
  double power_limit_w = 10.0;
  /// Substep of powered hours; rest hours are taken as a single step.
  double substep_s = 600.0;
};

/// Runs one hour at constant commanded power with voltage clamping. Returns
/// false (state undefined) if the model faults.
bool spm_hour(const spm::SpmModel& model, spm::SpmCellState& state, double power_w,
              const SpmPlanning& planning, double& delivered_w);

RolloutFn spm_rollout(const spm::SpmModel& model, spm::SpmCellState initial,
                      SpmPlanning planning);

/// Globally optimal linear-model dispatch over the whole price series.
/// Throws InfeasibleError when the window cannot be satisfied.
DispatchSchedule optimize_linear(const PriceSeries& prices, const linear::LinearCellParams& params,
                                 const ObjectiveConfig& config, double initial_soc);

struct PbmOptions {
  SpmPlanning planning;
  /// Coordinate step sizes (W), tried from coarse to fine.
  std::vector<double> step_levels_w{4.0, 2.0, 1.0, 0.5};
  int sweeps_per_level = 2;
  /// Also descend from the all-zero profile and keep the better result.
  bool multistart_zero = true;
};

/// Local improvement of `seed` by coordinate descent on SPM rollouts. The
/// returned objective is never below the seed's. `seed_objective`, if given,
/// receives the seed's evaluation.
DispatchSchedule optimize_pbm(const PriceSeries& prices, const spm::SpmModel& model,
                              const ObjectiveConfig& config, const spm::SpmCellState& initial,
                              std::span<const double> seed, const PbmOptions& options,
                              ObjectiveValue* seed_objective = nullptr);

struct WindowRecord {
  std::size_t index = 0;
  Timestamp start{};
  int hours = 0;
  int committed_h = 0;
  double seed_objective = 0.0;  ///< equal to objective for linear windows
  double objective = 0.0;
};

struct YearSchedule {
  DispatchSchedule schedule;
  std::vector<WindowRecord> windows;
  linear::LinearCellState linear_end;
  spm::SpmCellState spm_end;
};

using ProgressFn = std::function<void(std::size_t window, std::size_t windows)>;

/// Receding horizon: optimise each window, commit its first `commit_h` hours
/// (the whole of the last window), advance the model, repeat.
YearSchedule schedule_year(const PriceSeries& prices, const linear::LinearCellParams& params,
                           const ObjectiveConfig& config, double initial_soc,
                           const ProgressFn& progress = {});

/// Same with the physics-based model; each window is seeded with the
/// linear-model optimum under `seed_params`.
YearSchedule schedule_year(const PriceSeries& prices, const spm::SpmModel& model,
                           const ObjectiveConfig& config, const spm::SpmCellState& initial,
                           const PbmOptions& options, const linear::LinearCellParams& seed_params,
                           const ProgressFn& progress = {});

/// `timestamp,power_w,price_eur_mwh,soc,objective_cum_eur`
std::string schedule_to_csv(const DispatchSchedule& schedule);
/// Reads the power and price columns (and soc) back; economic fields are not restored.
DispatchSchedule parse_schedule(const std::string& text, const std::string& source);
DispatchSchedule load_schedule(const std::filesystem::path& path);

}  // namespace gridarb
