#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace medpower {

// Shortest decimal string that parses back to exactly the same double
// (std::to_chars). Deterministic across runs and platforms, which is what
// lets independently produced result files be compared byte for byte.
std::string format_double(double v);

// Strict full-string numeric parsers; throw std::invalid_argument on
// anything but a complete, well-formed number.
double parse_double(std::string_view s);
long parse_long(std::string_view s);
int parse_int(std::string_view s);
std::uint64_t parse_u64(std::string_view s);

// Split one CSV line on commas. Fields in this project never contain commas
// or quotes, so no quoting rules are needed.
std::vector<std::string> split_fields(std::string_view line);

}  // namespace medpower
