#include "labelagg/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

#include "labelagg/types.hpp"

namespace labelagg::csv {
namespace {

[[noreturn]] void fail(std::size_t line_no, std::string_view name, std::string_view field,
                       std::string_view what) {
  throw ParseError("line " + std::to_string(line_no) + ": field '" + std::string(name) +
                   "' " + std::string(what) + " (got '" + std::string(field) + "')");
}

template <typename T>
T parse_integral(std::string_view field, std::size_t line_no, std::string_view name) {
  T value{};
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (ec != std::errc() || ptr != end || field.empty()) {
    fail(line_no, name, field, "is not an integer");
  }
  return value;
}

}  // namespace

std::vector<std::string_view> split(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(std::string_view field, std::size_t line_no, std::string_view name) {
  double value = 0.0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (ec != std::errc() || ptr != end || field.empty()) {
    fail(line_no, name, field, "is not a number");
  }
  return value;
}

std::int64_t parse_int(std::string_view field, std::size_t line_no, std::string_view name) {
  return parse_integral<std::int64_t>(field, line_no, name);
}

std::uint64_t parse_uint64(std::string_view field, std::size_t line_no, std::string_view name) {
  return parse_integral<std::uint64_t>(field, line_no, name);
}

bool parse_bool(std::string_view field, std::size_t line_no, std::string_view name) {
  if (field == "true" || field == "1") return true;
  if (field == "false" || field == "0") return false;
  fail(line_no, name, field, "is not a boolean");
}

}  // namespace labelagg::csv
