#pragma once

#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace gridarb::spm {

struct OcvPoint {
  double stoichiometry;
  double potential_v;
};

/// Open-circuit potential of one electrode against its surface stoichiometry.
///
/// A monotone (PCHIP) interpolant through a table whose potentials never
/// increase with stoichiometry. Queries outside the table are clamped to
/// the end points.
class OcvCurve {
 public:
  OcvCurve() = default;
  explicit OcvCurve(std::vector<OcvPoint> points);

  double operator()(double stoichiometry) const;

  std::span<const OcvPoint> points() const { return points_; }
  double min_stoichiometry() const { return points_.front().stoichiometry; }
  double max_stoichiometry() const { return points_.back().stoichiometry; }
  bool empty() const { return points_.empty(); }

 private:
  struct Impl;
  std::vector<OcvPoint> points_;
  std::shared_ptr<const Impl> impl_;
};

/// Reads a two-column table with header `stoichiometry,potential_V`.
OcvCurve load_ocv_csv(const std::filesystem::path& path);
std::string ocv_to_csv(const OcvCurve& curve);

/// Entropic coefficient dU/dT (V/K) of the full cell against SoC, piecewise linear.
/// An empty table evaluates to zero everywhere.
class EntropicTable {
 public:
  EntropicTable() = default;
  EntropicTable(std::vector<double> soc, std::vector<double> dudt);

  double operator()(double soc) const;
  bool empty() const { return soc_.empty(); }

 private:
  std::vector<double> soc_;
  std::vector<double> dudt_;
};

}  // namespace gridarb::spm
