#pragma once

#include <charconv>
#include <cmath>
#include <stdexcept>
#include <string>

namespace scene3d {

/// Shortest decimal text that parses back to exactly the same double.
/// Integral values print without a decimal point.
inline std::string format_double(double v) {
    if (v == 0.0) return "0";
    if (std::isfinite(v) && v == std::floor(v) && std::abs(v) < 1e15)
        return std::to_string(static_cast<long long>(v));
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

/// Strict full-token double parse.
inline double parse_double(const std::string& token) {
    const char* begin = token.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0')
        throw std::invalid_argument("not a number: '" + token + "'");
    return v;
}

/// Strict full-token integer parse.
inline int parse_int(const std::string& token) {
    try {
        size_t pos = 0;
        const int v = std::stoi(token, &pos);
        if (pos != token.size()) throw std::invalid_argument(token);
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("not an integer: '" + token + "'");
    }
}

}  // namespace scene3d
