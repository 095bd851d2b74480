#pragma once

#include <charconv>
#include <cmath>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>

namespace sinrcap::csv {

// Shortest round-trip representation; identical bytes for identical doubles.
inline std::string num(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc{})
        return "nan";
    return std::string(buf, ptr);
}

/// Writes `text` as '#'-prefixed comment lines.
inline void comment_block(std::ostream& os, std::string_view text)
{
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line))
        os << "# " << line << '\n';
}

} // namespace sinrcap::csv
