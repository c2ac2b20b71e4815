#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace vltrack {

/// Shortest decimal representation that parses back to the same double.
/// Integral values print without a decimal point ("10", not "10.0").
std::string format_real(double value);

/// Strict double parse of the whole token; rejects trailing junk and empty
/// input. Returns nullopt on failure.
std::optional<double> parse_real(std::string_view token);

std::string_view trim(std::string_view text);

std::string to_lower_ascii(std::string_view text);

std::vector<std::string_view> split(std::string_view text, char separator);

}  // namespace vltrack
