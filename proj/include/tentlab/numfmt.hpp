#pragma once

#include <cstdio>
#include <string>

namespace tentlab {

/// Fixed float formatting used everywhere output must be byte-reproducible:
/// 17 significant digits round-trip any double exactly.
[[nodiscard]] inline std::string fmt_g17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace tentlab
