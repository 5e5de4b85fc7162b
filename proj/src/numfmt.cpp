#include "imurep/numfmt.hpp"

#include <charconv>
#include <cmath>
#include <string>

#include "imurep/errors.hpp"

namespace imurep {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view token, std::size_t line, std::string_view field) {
    token = trim(token);
    if (!token.empty() && token.front() == '+') token.remove_prefix(1);
    double v = 0.0;
    const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
    if (token.empty() || res.ec != std::errc{} || res.ptr != token.data() + token.size() ||
        !std::isfinite(v)) {
        throw ParseError(line, "invalid number '" + std::string(token) + "' in field " +
                                   std::string(field));
    }
    return v;
}

std::int64_t parse_int(std::string_view token, std::size_t line, std::string_view field) {
    token = trim(token);
    std::int64_t v = 0;
    const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
    if (token.empty() || res.ec != std::errc{} || res.ptr != token.data() + token.size()) {
        throw ParseError(line, "invalid integer '" + std::string(token) + "' in field " +
                                   std::string(field));
    }
    return v;
}

std::string_view trim(std::string_view s) noexcept {
    const auto ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(s.substr(start));
            return out;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
        const std::size_t b = i;
        while (i < s.size() && s[i] != ' ' && s[i] != '\t' && s[i] != '\r') ++i;
        if (i > b) out.push_back(s.substr(b, i - b));
    }
    return out;
}

}  // namespace imurep
