#pragma once

#include <cstdio>
#include <string>

namespace coe {

/// Fixed 17-significant-digit rendering used by every CSV writer.
inline std::string format_double(double value)
{
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

} // namespace coe
