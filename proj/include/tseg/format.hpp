#pragma once

#include <cstdio>
#include <string>
#include <string_view>

namespace tseg {

// Fixed 6-decimal rendering used in every CSV/markdown output.
inline std::string fmt_num(double v, int decimals = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v == 0.0 ? 0.0 : v);
    return buf;
}

// RFC 4180 quoting for free-text CSV fields (doc ids, group names).
inline std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (const char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

}  // namespace tseg
