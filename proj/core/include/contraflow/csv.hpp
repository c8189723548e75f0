#pragma once

#include <charconv>
#include <cstdint>
#include <ostream>
#include <string>

namespace contraflow {

/// Shortest decimal representation that round-trips the double, so equal
/// runs produce byte-identical files.
inline std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline std::string format_int(std::int64_t v) {
    char buf[24];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace contraflow
