#include "misflow/csv.hpp"

#include <charconv>
#include <cmath>
#include <istream>

#include <fmt/format.h>

#include "misflow/error.hpp"

namespace misflow::csv {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

}  // namespace

std::vector<Record> read(std::istream& in, std::string_view header_first) {
  std::vector<Record> out;
  std::string line;
  std::size_t lineno = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped.front() == '#') continue;
    Record rec{lineno, {}};
    std::size_t start = 0;
    while (true) {
      const auto comma = stripped.find(',', start);
      rec.fields.push_back(trim(std::string_view(stripped).substr(start, comma - start)));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (first && !header_first.empty() && rec.fields.front() == header_first) {
      first = false;
      continue;
    }
    first = false;
    out.push_back(std::move(rec));
  }
  return out;
}

void expect_columns(const Record& rec, std::size_t min_cols) {
  if (rec.fields.size() < min_cols) {
    throw ParseError("expected " + std::to_string(min_cols) + " fields, got " +
                         std::to_string(rec.fields.size()),
                     rec.line);
  }
}

const std::string& field(const Record& rec, std::size_t col) {
  expect_columns(rec, col + 1);
  return rec.fields[col];
}

std::int64_t to_int(const Record& rec, std::size_t col) {
  const std::string& s = field(rec, col);
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ParseError("field " + std::to_string(col + 1) + " is not an integer: '" + s + "'", rec.line);
  }
  return value;
}

double to_double(const Record& rec, std::size_t col) {
  const std::string& s = field(rec, col);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(value)) {
    throw ParseError("field " + std::to_string(col + 1) + " is not a number: '" + s + "'", rec.line);
  }
  return value;
}

std::string number(double value, int decimals) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (std::isnan(value)) return "nan";
  std::string s = fmt::format("{:.{}f}", value, decimals);
  if (s.find('.') != std::string::npos) {
    while (s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
  }
  if (s == "-0") s = "0";
  return s;
}

}  // namespace misflow::csv
