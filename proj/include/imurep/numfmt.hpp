#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace imurep {

/// Shortest decimal that parses back to exactly `v`.
std::string format_double(double v);

/// Strict full-token parses; throw ParseError citing `line`.
double parse_double(std::string_view token, std::size_t line, std::string_view field);
std::int64_t parse_int(std::string_view token, std::size_t line, std::string_view field);

std::string_view trim(std::string_view s) noexcept;
std::vector<std::string_view> split(std::string_view s, char sep);
std::vector<std::string_view> split_ws(std::string_view s);

}  // namespace imurep
