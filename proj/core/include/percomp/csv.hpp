#pragma once

#include <cmath>
#include <cstdio>
#include <string>

namespace percomp {

/// Decimal form used in every CSV we emit (10 significant digits).
inline std::string csv_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace percomp
