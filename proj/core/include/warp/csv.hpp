#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace warp::csv {

/// Shortest round-trip decimal form; identical input gives identical bytes.
std::string format_number(double value);
/// Empty string for nullopt.
std::string format_optional(const std::optional<double>& value);

/// Splits one line on commas. Quoted fields ("a,b") are unquoted; no embedded newlines.
std::vector<std::string> split_line(std::string_view line);

/// Strict numeric field parse; empty, NaN, inf or trailing junk give nullopt.
std::optional<double> parse_number(std::string_view field);

}  // namespace warp::csv
