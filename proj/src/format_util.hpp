#pragma once

#include <charconv>
#include <cstdio>
#include <string>
#include <string_view>

namespace mntd::detail {

// Shortest round-trippable decimal form, stable across runs.
inline std::string fmt_g17(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

inline bool parse_double(std::string_view text, double& out) {
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, out);
    return ec == std::errc{} && ptr == end;
}

inline bool parse_ll(std::string_view text, long long& out) {
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, out);
    return ec == std::errc{} && ptr == end;
}

}  // namespace mntd::detail
