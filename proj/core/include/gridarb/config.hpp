#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gridarb/linear_cell.hpp"
#include "gridarb/market.hpp"
#include "gridarb/optimizer.hpp"
#include "gridarb/replay.hpp"
#include "gridarb/spm/params.hpp"

namespace gridarb {

enum class Planner { kLinear, kSpm };

/// One experiment: how it is planned and how the tester runs it.
struct Scenario {
  std::string id;
  Planner planner = Planner::kLinear;
  ObjectiveConfig objective;
  /// Linear model as seen by the planner (SoC window included).
  linear::LinearCellParams linear;
  TesterLimits tester;
};

struct StudyConfig {
  std::uint64_t seed = 7;
  int days = 365;
  SyntheticMarket market;
  /// Measured prices to use instead of the synthetic market.
  std::optional<std::filesystem::path> prices_csv;

  linear::LinearCellParams linear;
  spm::SpmParams spm = spm::SpmParams::defaults();
  double initial_soc = 0.5;
  ObjectiveConfig objective;
  TesterLimits tester;
  CheckupProtocol checkup;
  ExperimentOptions experiment;
  PbmOptions pbm;

  std::vector<Scenario> scenarios;
  /// Scenarios run by the end-to-end study.
  std::vector<std::string> study{"lm-revenue", "lm-profit", "pbm-profit"};

  /// Throws DataError for an unknown id.
  const Scenario& scenario(std::string_view id) const;
};

/// Built-in study: lm-revenue, lm-profit, pbm-profit and pbm-revenue.
StudyConfig default_study();

/// INI file applied on top of default_study(). Relative paths resolve against
/// the file's directory. Unknown sections or keys are a DataError.
StudyConfig load_study(const std::filesystem::path& path);
StudyConfig parse_study(const std::string& text, const std::filesystem::path& base_dir,
                        const std::string& source);

/// Cell parameter pack: INI with the OCV tables as two-column CSV files.
spm::SpmParams load_spm_pack(const std::filesystem::path& path);

}  // namespace gridarb
