#pragma once

#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>
#include <system_error>

#include "readlab/error.hpp"

namespace readlab::text {

/// ASCII casefold. Non-ASCII bytes pass through unchanged.
inline std::string casefold(std::string_view s) {
    std::string out(s);
    for (char& c : out) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    return out;
}

inline bool is_ascii_alpha(unsigned char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

inline bool is_ascii_alnum(unsigned char c) {
    return is_ascii_alpha(c) || (c >= '0' && c <= '9');
}

/// Number of alphabetic characters. ASCII letters count one each; every
/// non-ASCII UTF-8 code point is treated as a letter.
inline std::size_t letter_count(std::string_view s) {
    std::size_t n = 0;
    for (unsigned char c : s) {
        if (is_ascii_alpha(c)) ++n;
        else if (c >= 0xC0) ++n; // UTF-8 lead byte
    }
    return n;
}

/// True when the token carries at least one letter or digit.
inline bool has_alnum(std::string_view s) {
    for (unsigned char c : s) {
        if (is_ascii_alnum(c) || c >= 0x80) return true;
    }
    return false;
}

inline std::string_view trim(std::string_view s) {
    const auto ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

/// Shortest decimal representation that round-trips.
inline std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) throw Error("cannot format number");
    return std::string(buf, ptr);
}

inline double parse_double(std::string_view s) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
        throw ParseError("not a number: '" + std::string(s) + "'");
    }
    return v;
}

inline long long parse_int(std::string_view s) {
    s = trim(s);
    long long v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
        throw ParseError("not an integer: '" + std::string(s) + "'");
    }
    return v;
}

} // namespace readlab::text
