#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "d2means/errors.hpp"
#include "d2means/measure.hpp"

namespace d2means {

namespace detail {

inline parse_error csv_error(std::string_view origin, std::size_t line, std::string_view what) {
  std::ostringstream msg;
  msg << origin << ":line " << line << ": " << what;
  return parse_error(msg.str());
}

// Strict double parse: the whole field, no stray characters. Space or tab
// padding around the field is tolerated.
inline bool parse_field(std::string_view field, double& out) {
  std::size_t begin = 0;
  std::size_t end = field.size();
  while (begin < end && (field[begin] == ' ' || field[begin] == '\t')) ++begin;
  while (end > begin && (field[end - 1] == ' ' || field[end - 1] == '\t')) --end;
  if (begin == end) return false;
  const char* first = field.data() + begin;
  const char* last = field.data() + end;
  const auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

// Splits on commas and parses every field; false if any field is not a
// number. Throws only on non-finite values.
inline bool parse_row(std::string_view row, std::string_view origin, std::size_t line,
                      Point& out) {
  out.clear();
  std::size_t field_start = 0;
  for (std::size_t i = 0; i <= row.size(); ++i) {
    if (i != row.size() && row[i] != ',') continue;
    double value = 0.0;
    if (!parse_field(row.substr(field_start, i - field_start), value)) return false;
    if (!std::isfinite(value)) throw csv_error(origin, line, "non-finite value");
    out.push_back(value);
    field_start = i + 1;
  }
  return true;
}

}  // namespace detail

// Comma-separated rows of numeric coordinates, one point per row. A first
// row that fails numeric parsing is treated as a header and skipped. Row
// arity is fixed by the first data row. Values must be finite. `origin`
// names the source in error messages.
inline Dataset parse_csv(std::string_view text, std::string_view origin = "<input>") {
  std::vector<Point> points;
  std::istringstream stream{std::string(text)};
  std::string row;
  std::size_t line_number = 0;
  std::size_t expected_dim = 0;
  Point point;
  while (std::getline(stream, row)) {
    ++line_number;
    if (!row.empty() && row.back() == '\r') row.pop_back();
    if (row.empty()) throw detail::csv_error(origin, line_number, "empty row");
    if (!detail::parse_row(row, origin, line_number, point)) {
      if (line_number == 1) continue;  // header row
      throw detail::csv_error(origin, line_number, "malformed numeric field");
    }
    if (expected_dim == 0) {
      expected_dim = point.size();
    } else if (point.size() != expected_dim) {
      std::ostringstream msg;
      msg << "expected " << expected_dim << " fields, found " << point.size();
      throw detail::csv_error(origin, line_number, msg.str());
    }
    points.push_back(point);
  }
  if (points.empty())
    throw detail::csv_error(origin, std::max<std::size_t>(line_number, 1), "no data rows");
  return make_dataset(std::move(points));
}

inline Dataset load_dataset(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw parse_error(path + ": cannot open file");
  std::ostringstream buffer;
  buffer << file.rdbuf();
  return parse_csv(buffer.str(), path);
}

}  // namespace d2means
