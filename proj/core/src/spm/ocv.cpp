#include "gridarb/spm/ocv.hpp"

#include <algorithm>
// Boost 1.74 pchip calls isnan unqualified; math.h puts it in the global namespace.
#include <math.h>

#include <boost/math/interpolators/pchip.hpp>
#include <sstream>
#include <stdexcept>

#include "gridarb/common/csv.hpp"
#include "gridarb/common/errors.hpp"

namespace gridarb::spm {

struct OcvCurve::Impl {
  boost::math::interpolators::pchip<std::vector<double>> spline;
};

OcvCurve::OcvCurve(std::vector<OcvPoint> points) : points_(std::move(points)) {
  if (points_.size() < 4) throw std::invalid_argument("OCV table needs at least 4 points");
  for (std::size_t i = 1; i < points_.size(); ++i) {
    if (!(points_[i].stoichiometry > points_[i - 1].stoichiometry)) {
      throw std::invalid_argument("OCV stoichiometry must be strictly increasing");
    }
    if (points_[i].potential_v > points_[i - 1].potential_v) {
      throw std::invalid_argument("OCV potential must not increase with stoichiometry");
    }
  }
  std::vector<double> x, y;
  x.reserve(points_.size());
  y.reserve(points_.size());
  for (const auto& p : points_) {
    x.push_back(p.stoichiometry);
    y.push_back(p.potential_v);
  }
  impl_ = std::make_shared<const Impl>(
      Impl{boost::math::interpolators::pchip<std::vector<double>>(std::move(x), std::move(y))});
}

double OcvCurve::operator()(double stoichiometry) const {
  if (!impl_) throw std::logic_error("OcvCurve: empty curve");
  const double x = std::clamp(stoichiometry, points_.front().stoichiometry,
                              points_.back().stoichiometry);
  return impl_->spline(x);
}

OcvCurve load_ocv_csv(const std::filesystem::path& path) {
  const auto table = read_csv_file(path, "stoichiometry,potential_V");
  std::vector<OcvPoint> points;
  points.reserve(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const std::string ctx = path.string() + " row " + std::to_string(table.line_numbers[i]);
    points.push_back({parse_double(table.rows[i][0], ctx), parse_double(table.rows[i][1], ctx)});
  }
  try {
    return OcvCurve(std::move(points));
  } catch (const std::invalid_argument& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

std::string ocv_to_csv(const OcvCurve& curve) {
  std::ostringstream out;
  out << "stoichiometry,potential_V\n";
  for (const auto& p : curve.points()) {
    out << format_double(p.stoichiometry) << ',' << format_double(p.potential_v) << '\n';
  }
  return out.str();
}

EntropicTable::EntropicTable(std::vector<double> soc, std::vector<double> dudt)
    : soc_(std::move(soc)), dudt_(std::move(dudt)) {
  if (soc_.size() != dudt_.size() || soc_.size() == 1) {
    throw std::invalid_argument("entropic table needs matching columns with >= 2 rows");
  }
  if (!std::is_sorted(soc_.begin(), soc_.end()) ||
      std::adjacent_find(soc_.begin(), soc_.end()) != soc_.end()) {
    throw std::invalid_argument("entropic table soc must be strictly increasing");
  }
}

double EntropicTable::operator()(double soc) const {
  if (soc_.empty()) return 0.0;
  if (soc <= soc_.front()) return dudt_.front();
  if (soc >= soc_.back()) return dudt_.back();
  const auto it = std::upper_bound(soc_.begin(), soc_.end(), soc);
  const auto i = static_cast<std::size_t>(it - soc_.begin());
  const double w = (soc - soc_[i - 1]) / (soc_[i] - soc_[i - 1]);
  return dudt_[i - 1] + w * (dudt_[i] - dudt_[i - 1]);
}

}  // namespace gridarb::spm
