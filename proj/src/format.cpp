#include "crr/format.hpp"

#include <cstdio>
#include <cstdlib>

namespace crr {

std::string format9(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  std::string s(buf);
  if (s == "-0") s = "0";
  return s;
}

double round9(double x) { return std::strtod(format9(x).c_str(), nullptr); }

} // namespace crr
