#ifndef CDSA_SRC_NUMFMT_H_
#define CDSA_SRC_NUMFMT_H_

#include <charconv>
#include <cstdio>
#include <string>

namespace cdsa::internal {

// Shortest representation that round-trips.
inline std::string format_exact(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, end);
}

inline std::string format_fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
  return buf;
}

}  // namespace cdsa::internal

#endif  // CDSA_SRC_NUMFMT_H_
