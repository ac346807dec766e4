#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace misflow::csv {

struct Record {
  std::size_t line = 0;
  std::vector<std::string> fields;
};

/// Reads comma-separated records. Blank lines and lines starting with '#'
/// are skipped. When `header` is non-empty and the first record's first
/// field equals header[0], that record is dropped.
std::vector<Record> read(std::istream& in, std::string_view header_first = {});

std::int64_t to_int(const Record& rec, std::size_t col);
double to_double(const Record& rec, std::size_t col);
const std::string& field(const Record& rec, std::size_t col);
void expect_columns(const Record& rec, std::size_t min_cols);

/// Fixed-point with trailing zeros trimmed ("0.5", "12", "0.2189").
std::string number(double value, int decimals = 6);

}  // namespace misflow::csv
