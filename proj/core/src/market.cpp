#include "gridarb/market.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "gridarb/common/csv.hpp"
#include "gridarb/common/errors.hpp"

namespace gridarb {

PriceSeries::PriceSeries(Timestamp start, std::vector<double> prices_eur_mwh)
    : start_(start), prices_(std::move(prices_eur_mwh)) {
  if (prices_.empty()) throw DataError("price series is empty");
  for (std::size_t i = 0; i < prices_.size(); ++i) {
    if (!std::isfinite(prices_[i])) {
      throw DataError("price at " + format_timestamp(time_of(i)) + " is not finite");
    }
  }
}

double PriceSeries::price_at(Timestamp t) const {
  if (t < start_ || t >= end()) {
    throw std::out_of_range("no price for " + format_timestamp(t));
  }
  return prices_[static_cast<std::size_t>((t - start_) / period())];
}

PriceSeries PriceSeries::slice(std::size_t first, std::size_t count) const {
  if (count == 0 || first > prices_.size() || count > prices_.size() - first) {
    throw std::out_of_range("price slice outside the series");
  }
  const auto begin = prices_.begin() + static_cast<std::ptrdiff_t>(first);
  return PriceSeries(time_of(first), std::vector<double>(begin, begin + static_cast<std::ptrdiff_t>(count)));
}

PriceSeries parse_prices(const std::string& text, const std::string& source) {
  std::istringstream in(text);
  const CsvTable table = read_csv(in, "timestamp,price_eur_mwh", source);
  if (table.rows.empty()) throw DataError(source + ": no price rows");
  std::vector<double> prices;
  prices.reserve(table.rows.size());
  Timestamp start{};
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    const std::string where = source + ":" + std::to_string(table.line_numbers[i]);
    if (row.size() != 2) throw DataError(where + ": expected 2 fields");
    Timestamp t;
    try {
      t = parse_timestamp(row[0]);
    } catch (const DataError& e) {
      throw DataError(where + ": " + e.what());
    }
    if (i == 0) {
      start = t;
    } else {
      const Timestamp expected = start + PriceSeries::period() * static_cast<long long>(i);
      if (t < expected) throw DataError(where + ": duplicated or non-monotone hour " + row[0]);
      if (t > expected) throw DataError(where + ": missing hour before " + row[0]);
    }
    prices.push_back(parse_double(row[1], where));
  }
  return PriceSeries(start, std::move(prices));
}

PriceSeries load_prices(const std::filesystem::path& path) {
  return parse_prices(read_text_file(path), path.string());
}

std::string prices_to_csv(const PriceSeries& series) {
  std::string out = "timestamp,price_eur_mwh\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    out += format_timestamp(series.time_of(i));
    out += ',';
    out += format_double(series[i]);
    out += '\n';
  }
  return out;
}

void save_prices(const std::filesystem::path& path, const PriceSeries& series) {
  write_text_file(path, prices_to_csv(series));
}

namespace {

// Mean-free daily profile: night trough, morning peak around 08-09 h, midday
// dip, evening peak around 19 h. Units of the shape amplitude.
constexpr double kDailyShape[24] = {
    -0.55, -0.75, -0.90, -1.00, -0.95, -0.70,  //
    -0.20, 0.45,  0.80,  0.70,  0.45,  0.25,   //
    0.10,  0.00,  -0.10, -0.05, 0.15,  0.55,   //
    0.95,  1.00,  0.80,  0.35,  -0.05, -0.35,  //
};

class Uniform {
 public:
  explicit Uniform(std::uint64_t seed) : engine_(seed) {}
  /// 53 random bits mapped to [0, 1).
  double operator()() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  /// Irwin-Hall sum of four uniforms, recentred: mean 0, variance 1/3.
  double centred() { return (*this)() + (*this)() + (*this)() + (*this)() - 2.0; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace

PriceSeries synthesize_prices(std::uint64_t seed, int days, const SyntheticMarket& market) {
  if (days < 1) throw std::invalid_argument("synthesize_prices: days must be >= 1");
  double shape_mean = 0.0;
  for (double v : kDailyShape) shape_mean += v;
  shape_mean /= 24.0;

  Uniform u(seed);
  std::vector<double> prices;
  prices.reserve(static_cast<std::size_t>(days) * 24);
  const auto start_day = std::chrono::floor<std::chrono::days>(market.start);
  // 1970-01-01 was a Thursday; Monday is weekday 0.
  const long long first_weekday = (start_day.time_since_epoch().count() + 3) % 7;
  const std::chrono::year_month_day first_date{start_day};
  const auto year_start = std::chrono::sys_days{first_date.year() / std::chrono::January / 1};
  const long long first_doy = (start_day - year_start).count();

  double daily_state = 0.0;
  for (int d = 0; d < days; ++d) {
    // Triangle wave over the year: 1 at new year, 0 at midsummer.
    const double phase = static_cast<double>((first_doy + d) % 365) / 365.0;
    const double winter = phase < 0.5 ? 1.0 - 2.0 * phase : 2.0 * phase - 1.0;
    const bool weekend = (first_weekday + d) % 7 >= 5;

    // Persistent day-to-day level drift (AR(1)).
    daily_state = 0.6 * daily_state + market.daily_noise_eur_mwh * u.centred() * 1.2;
    // The weekend discount is spread over the week so the mean stays at mean_eur_mwh.
    double level = market.mean_eur_mwh + market.weekend_discount_eur_mwh * 2.0 / 7.0 +
                   market.seasonal_level_eur_mwh * (winter - 0.5) + daily_state;
    double amplitude = market.shape_amplitude_eur_mwh * (0.8 + 0.4 * winter + 0.3 * u.centred());
    if (weekend) {
      level -= market.weekend_discount_eur_mwh;
      amplitude *= 0.7;
    }
    for (int h = 0; h < 24; ++h) {
      double p = level + amplitude * (kDailyShape[h] - shape_mean) +
                 market.hourly_noise_eur_mwh * u.centred() * 1.7;
      const double r = u();
      const double x = u();
      if (r < market.spike_probability && kDailyShape[h] > 0.3) {
        p += market.spike_height_eur_mwh * x * x;
      } else if (r < market.spike_probability && weekend && kDailyShape[h] < -0.5) {
        p -= market.spike_height_eur_mwh * 0.6 * x;
      }
      prices.push_back(p);
    }
  }
  return PriceSeries(market.start, std::move(prices));
}

}  // namespace gridarb
