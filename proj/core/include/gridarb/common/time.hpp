#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace gridarb {

using Timestamp = std::chrono::sys_seconds;
using Seconds = std::chrono::seconds;

inline constexpr double kSecondsPerHour = 3600.0;

/// Formats as `YYYY-MM-DDTHH:MM:SSZ`.
std::string format_timestamp(Timestamp t);

/// Parses the format written by format_timestamp; throws DataError otherwise.
Timestamp parse_timestamp(std::string_view text);

/// Midnight UTC of the given civil date.
Timestamp make_timestamp(int year, unsigned month, unsigned day, unsigned hour = 0);

inline double hours_between(Timestamp from, Timestamp to) {
  return static_cast<double>((to - from).count()) / kSecondsPerHour;
}

}  // namespace gridarb
