#include "gridarb/common/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

#include "gridarb/common/errors.hpp"

namespace gridarb {

const char* to_string(FaultKind kind) noexcept {
  switch (kind) {
    case FaultKind::kSaturation: return "saturation";
    case FaultKind::kKineticsStall: return "kinetics stall";
    case FaultKind::kThermalGuard: return "thermal guard";
    case FaultKind::kVoltageBound: return "voltage bound";
    case FaultKind::kSocWindow: return "soc window";
    case FaultKind::kCurrentLimit: return "current limit";
  }
  return "fault";
}

std::string format_double(double value) {
  if (value == 0.0) return "0";  // folds -0 as well
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

double parse_double(std::string_view field, std::string_view context) {
  field = trim(field);
  double value = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  if (!field.empty() && *first == '+') ++first;
  auto res = std::from_chars(first, last, value);
  if (field.empty() || res.ec != std::errc{} || res.ptr != last || !std::isfinite(value)) {
    throw DataError(std::string(context) + ": cannot parse number '" + std::string(field) + "'");
  }
  return value;
}

long long parse_integer(std::string_view field, std::string_view context) {
  field = trim(field);
  long long value = 0;
  auto res = std::from_chars(field.data(), field.data() + field.size(), value);
  if (field.empty() || res.ec != std::errc{} || res.ptr != field.data() + field.size()) {
    throw DataError(std::string(context) + ": cannot parse integer '" + std::string(field) + "'");
  }
  return value;
}

std::vector<std::string_view> split_csv_line(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      out.push_back(trim(line.substr(start)));
      break;
    }
    out.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
  return out;
}

CsvTable read_csv(std::istream& in, std::string_view expected_header, std::string_view source) {
  CsvTable table;
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw DataError(std::string(source) + ": empty file");
  ++line_no;
  if (trim(line) != expected_header) {
    throw DataError(std::string(source) + ": expected header '" + std::string(expected_header) +
                    "', got '" + std::string(trim(line)) + "'");
  }
  for (auto f : split_csv_line(expected_header)) table.header.emplace_back(f);
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != table.header.size()) {
      throw DataError(std::string(source) + ": row " + std::to_string(line_no) + " has " +
                      std::to_string(fields.size()) + " fields, expected " +
                      std::to_string(table.header.size()));
    }
    std::vector<std::string> row(fields.begin(), fields.end());
    table.rows.push_back(std::move(row));
    table.line_numbers.push_back(line_no);
  }
  return table;
}

CsvTable read_csv_file(const std::filesystem::path& path, std::string_view expected_header) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return read_csv(in, expected_header, path.string());
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw DataError("write failed for " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace gridarb
