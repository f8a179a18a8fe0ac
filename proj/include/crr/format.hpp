#pragma once

#include <string>

namespace crr {

/// Decimal text with nine significant digits ("%.9g").
std::string format9(double x);

/// `x` rounded to nine significant digits, for JSON emission.
double round9(double x);

} // namespace crr
