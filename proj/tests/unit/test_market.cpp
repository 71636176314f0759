#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <sstream>

#include "gridarb/common/errors.hpp"
#include "gridarb/market.hpp"

using namespace gridarb;

namespace {

std::string csv_rows(int hours, int skip = -1, int repeat = -1) {
  std::ostringstream out;
  out << "timestamp,price_eur_mwh\n";
  const Timestamp t0 = make_timestamp(2014, 3, 1);
  for (int h = 0; h < hours; ++h) {
    if (h == skip) continue;
    out << format_timestamp(t0 + Seconds(3600 * h)) << ',' << 30 + h << '\n';
    if (h == repeat) out << format_timestamp(t0 + Seconds(3600 * h)) << ',' << 1 << '\n';
  }
  return out.str();
}

std::string error_of(const std::string& text) {
  try {
    parse_prices(text, "p.csv");
  } catch (const DataError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST(Prices, ParsesDayOfRows) {
  const auto s = parse_prices(csv_rows(24), "p.csv");
  EXPECT_EQ(s.size(), 24u);
  EXPECT_EQ(s.start(), make_timestamp(2014, 3, 1));
  EXPECT_EQ(s[5], 35.0);
}

TEST(Prices, DuplicateHourNamesTheRow) {
  // header is line 1, hour 3 on line 5, its duplicate on line 6
  const auto msg = error_of(csv_rows(24, -1, 3));
  EXPECT_NE(msg.find("p.csv:6"), std::string::npos) << msg;
  EXPECT_NE(msg.find("duplicated"), std::string::npos) << msg;
}

TEST(Prices, MissingHourRejected) {
  const auto msg = error_of(csv_rows(24, 7));
  EXPECT_NE(msg.find("p.csv:9"), std::string::npos) << msg;
  EXPECT_NE(msg.find("missing"), std::string::npos) << msg;
}

TEST(Prices, MalformedRowsRejected) {
  EXPECT_FALSE(error_of("timestamp,price\n").empty());
  EXPECT_FALSE(error_of("timestamp,price_eur_mwh\n").empty());
  EXPECT_FALSE(error_of("timestamp,price_eur_mwh\n2014-01-01T00:00:00Z,abc\n").empty());
  EXPECT_FALSE(error_of("timestamp,price_eur_mwh\n2014-01-01,30\n").empty());
  EXPECT_FALSE(error_of("timestamp,price_eur_mwh\n2014-01-01T00:00:00Z,nan\n").empty());
}

TEST(Prices, NegativePricesAllowed) {
  const auto s =
      parse_prices("timestamp,price_eur_mwh\n2014-01-01T00:00:00Z,-12.5\n", "neg.csv");
  EXPECT_EQ(s[0], -12.5);
}

TEST(Prices, SaveLoadRoundTripIsByteIdentical) {
  const auto s = synthesize_prices(3, 5);
  const auto path = std::filesystem::temp_directory_path() / "gridarb_test_prices.csv";
  save_prices(path, s);
  const auto back = load_prices(path);
  EXPECT_EQ(prices_to_csv(back), prices_to_csv(s));
  EXPECT_EQ(back.start(), s.start());
  for (std::size_t i = 0; i < s.size(); ++i) EXPECT_EQ(back[i], s[i]);
  std::filesystem::remove(path);
}

TEST(PriceLookup, PiecewiseConstantOnHalfOpenRange) {
  const auto s = parse_prices(csv_rows(24), "p.csv");
  const Timestamp t0 = s.start();
  EXPECT_EQ(s.price_at(t0), 30.0);
  EXPECT_EQ(s.price_at(t0 + Seconds(3600 * 4)), 34.0);
  EXPECT_EQ(s.price_at(t0 + Seconds(3600 * 4 + 1800)), 34.0);
  EXPECT_EQ(s.price_at(t0 + Seconds(3600 * 5 - 1)), 34.0);
  EXPECT_EQ(s.price_at(s.end() - Seconds(1)), 53.0);
  EXPECT_THROW(s.price_at(s.end()), std::out_of_range);
  EXPECT_THROW(s.price_at(t0 - Seconds(1)), std::out_of_range);
}

TEST(PriceLookup, SameHourSamePrice) {
  const auto s = synthesize_prices(11, 3);
  for (std::size_t h = 0; h < s.size(); ++h) {
    for (int sec : {0, 1, 599, 1800, 3599}) {
      EXPECT_EQ(s.price_at(s.time_of(h) + Seconds(sec)), s[h]);
    }
  }
}

TEST(PriceSlice, Bounds) {
  const auto s = synthesize_prices(1, 4);
  const auto part = s.slice(24, 48);
  EXPECT_EQ(part.size(), 48u);
  EXPECT_EQ(part.start(), s.time_of(24));
  EXPECT_EQ(part[0], s[24]);
  EXPECT_THROW(s.slice(90, 7), std::out_of_range);
}

TEST(Synthetic, DeterministicPerSeed) {
  const auto a = synthesize_prices(7, 60);
  const auto b = synthesize_prices(7, 60);
  const auto c = synthesize_prices(8, 60);
  ASSERT_EQ(a.size(), b.size());
  EXPECT_EQ(std::memcmp(a.prices().data(), b.prices().data(), a.size() * sizeof(double)), 0);
  EXPECT_NE(prices_to_csv(a), prices_to_csv(c));
}

TEST(Synthetic, YearStatistics) {
  const auto s = synthesize_prices(7, 365);
  ASSERT_EQ(s.size(), 8760u);
  double sum = 0.0, spread = 0.0;
  for (std::size_t d = 0; d < 365; ++d) {
    const auto day = s.prices().subspan(d * 24, 24);
    const auto [lo, hi] = std::minmax_element(day.begin(), day.end());
    spread += *hi - *lo;
  }
  for (double p : s.prices()) {
    ASSERT_TRUE(std::isfinite(p));
    sum += p;
  }
  spread /= 365;
  EXPECT_GE(spread, 15.0);
  EXPECT_LE(spread, 80.0);
  EXPECT_NEAR(sum / 8760, 40.0, 3.0);
}

TEST(Synthetic, WeekendsCheaperThanWeekdays) {
  const auto s = synthesize_prices(7, 364);
  double weekday = 0.0, weekend = 0.0;
  for (std::size_t h = 0; h < s.size(); ++h) {
    const auto days = std::chrono::floor<std::chrono::days>(s.time_of(h));
    const std::chrono::weekday wd{days};
    (wd == std::chrono::Saturday || wd == std::chrono::Sunday ? weekend : weekday) += s[h];
  }
  EXPECT_LT(weekend / (2 * 52 * 24), weekday / (5 * 52 * 24));
}

TEST(Synthetic, EveningPeakAboveNight) {
  const auto s = synthesize_prices(5, 120);
  double night = 0.0, evening = 0.0;
  for (std::size_t d = 0; d < 120; ++d) {
    night += s[d * 24 + 3];
    evening += s[d * 24 + 19];
  }
  EXPECT_GT(evening, night);
}

TEST(Synthetic, RejectsZeroDays) { EXPECT_THROW(synthesize_prices(1, 0), std::invalid_argument); }
