#pragma once

#include <string>

namespace tontine {

/// Six significant digits, the precision of every CSV the library emits.
std::string format_number(double v);

} // namespace tontine
