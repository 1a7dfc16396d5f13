#pragma once

#include <charconv>
#include <string>

namespace modloc {

// shortest round-trip decimal form, locale-free
inline std::string format_double(double x) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

}  // namespace modloc
