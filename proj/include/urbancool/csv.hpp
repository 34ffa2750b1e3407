#pragma once

#include <cstdio>
#include <string>
#include <vector>

namespace urbancool {

/// 17 significant digits so CSV output round-trips doubles exactly.
inline std::string fmt_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// Split one CSV line; supports double-quoted fields with "" escapes.
std::vector<std::string> split_csv_line(const std::string& line);

/// Quote a field when it contains a comma, quote, or newline.
std::string csv_field(const std::string& s);

std::vector<std::string> split(const std::string& s, char sep);

}  // namespace urbancool
