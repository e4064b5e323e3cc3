#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace synth::util {

std::string to_lower(std::string_view s);
std::string trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

bool contains_ci(std::string_view haystack, std::string_view needle);
bool starts_with(std::string_view s, std::string_view prefix);

// "a_b c" -> "a b c" style normalization used for keyword comparison:
// lowercase, collapse runs of whitespace/underscores to single spaces, trim.
std::string normalize_term(std::string_view s);

// Fixed-precision decimal formatting (no locale, '.' separator).
std::string format_double(double value, int precision);

}  // namespace synth::util
