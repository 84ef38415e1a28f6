#ifndef FOCKPART_SRC_TEXT_FORMAT_HPP
#define FOCKPART_SRC_TEXT_FORMAT_HPP

#include <cstdio>
#include <string>

namespace fockpart::text {

/// Deterministic 17-significant-digit rendering, C locale semantics.
inline std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace fockpart::text

#endif  // FOCKPART_SRC_TEXT_FORMAT_HPP
