#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace labelagg::csv {

// Minimal helpers for the numeric CSV files this library reads and writes.
// Fields never contain commas or quotes.

std::vector<std::string_view> split(std::string_view line);

/// %.17g, which round-trips every finite double; inf/nan spelled inf, -inf, nan.
std::string format_double(double v);

// Each parser throws ParseError mentioning `line_no` and the field name.
double parse_double(std::string_view field, std::size_t line_no, std::string_view name);
std::int64_t parse_int(std::string_view field, std::size_t line_no, std::string_view name);
std::uint64_t parse_uint64(std::string_view field, std::size_t line_no, std::string_view name);
bool parse_bool(std::string_view field, std::size_t line_no, std::string_view name);

}  // namespace labelagg::csv
