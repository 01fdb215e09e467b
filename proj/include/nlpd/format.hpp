#pragma once

#include <cstdio>
#include <string>

namespace nlpd {

/// Round-trip decimal representation used in every CSV and JSON artifact.
inline std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace nlpd
