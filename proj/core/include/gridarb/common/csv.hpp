#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace gridarb {

/// Shortest decimal representation that round-trips exactly.
std::string format_double(double value);

/// Strict parse of a full field as a double; throws DataError naming `context`.
double parse_double(std::string_view field, std::string_view context);

long long parse_integer(std::string_view field, std::string_view context);

std::vector<std::string_view> split_csv_line(std::string_view line);

/// A CSV file read into memory with its header validated.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  /// 1-based line numbers of each row in the source file (header is line 1).
  std::vector<std::size_t> line_numbers;
};

/// Reads a comma separated file whose first line must equal `expected_header`.
CsvTable read_csv(std::istream& in, std::string_view expected_header, std::string_view source);
CsvTable read_csv_file(const std::filesystem::path& path, std::string_view expected_header);

/// Writes `content` to `path`, creating parent directories.
void write_text_file(const std::filesystem::path& path, std::string_view content);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace gridarb
