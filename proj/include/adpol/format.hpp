#pragma once

#include <charconv>
#include <cmath>
#include <string>

namespace adpol {

/// 17 significant digits, printf "%.17g" style. NaN prints as "nan".
[[nodiscard]] inline std::string format_g17(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return {buf, res.ptr};
}

/// Shortest representation that round-trips to the same double.
[[nodiscard]] inline std::string format_shortest(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return {buf, res.ptr};
}

}  // namespace adpol
