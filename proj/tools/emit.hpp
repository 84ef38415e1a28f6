#ifndef FOCKPART_TOOLS_EMIT_HPP
#define FOCKPART_TOOLS_EMIT_HPP

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace fockpart::tools {

/// 17 significant digits, '.' decimal separator, byte-stable across runs.
inline std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

/// Writes to the path when given, else to stdout.
inline int write_output(const std::optional<std::string>& path, const std::string& body) {
  if (!path) {
    std::cout << body;
    return 0;
  }
  std::ofstream out(*path, std::ios::binary);
  if (!out) {
    std::cerr << "cannot open output file: " << *path << "\n";
    return 2;
  }
  out << body;
  return 0;
}

}  // namespace fockpart::tools

#endif  // FOCKPART_TOOLS_EMIT_HPP
