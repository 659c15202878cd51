#include "tontine/format.hpp"

#include <cmath>
#include <cstdio>

namespace tontine {

std::string format_number(double v) {
    if (std::isnan(v)) {
        return "NA";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    std::string s(buf);
    return s == "-0" ? "0" : s;
}

} // namespace tontine
