#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "gridarb/common/time.hpp"

namespace gridarb {

/// Hourly day-ahead prices (EUR/MWh) on a half-open time range.
class PriceSeries {
 public:
  PriceSeries(Timestamp start, std::vector<double> prices_eur_mwh);

  Timestamp start() const { return start_; }
  Timestamp end() const { return start_ + period() * static_cast<long long>(prices_.size()); }
  static constexpr Seconds period() { return Seconds(3600); }
  std::size_t size() const { return prices_.size(); }
  std::span<const double> prices() const { return prices_; }
  double operator[](std::size_t hour) const { return prices_[hour]; }
  Timestamp time_of(std::size_t hour) const {
    return start_ + period() * static_cast<long long>(hour);
  }

  /// Price in force at `t`. Throws std::out_of_range outside [start, end).
  double price_at(Timestamp t) const;
  /// Consecutive hours [first, first + count); throws std::out_of_range past the end.
  PriceSeries slice(std::size_t first, std::size_t count) const;

 private:
  Timestamp start_;
  std::vector<double> prices_;
};

/// Strict reader for `timestamp,price_eur_mwh` files with consecutive hourly rows.
PriceSeries parse_prices(const std::string& text, const std::string& source);
PriceSeries load_prices(const std::filesystem::path& path);
std::string prices_to_csv(const PriceSeries& series);
void save_prices(const std::filesystem::path& path, const PriceSeries& series);

struct SyntheticMarket {
  Timestamp start = make_timestamp(2014, 1, 1);
  double mean_eur_mwh = 40.0;
  /// Half the typical intraday swing of the daily shape.
  double shape_amplitude_eur_mwh = 18.0;
  /// Extra level in deep winter relative to midsummer.
  double seasonal_level_eur_mwh = 8.0;
  double weekend_discount_eur_mwh = 7.0;
  double daily_noise_eur_mwh = 5.0;
  double hourly_noise_eur_mwh = 3.0;
  double spike_probability = 0.015;
  double spike_height_eur_mwh = 60.0;
};

/// Seeded synthetic hourly prices. Only integer operations on the generator
/// output and plain arithmetic are used, so the series is bit-identical on any
/// IEEE-754 platform.
PriceSeries synthesize_prices(std::uint64_t seed, int days, const SyntheticMarket& market = {});

}  // namespace gridarb
