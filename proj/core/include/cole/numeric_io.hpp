#ifndef COLE_NUMERIC_IO_HPP_
#define COLE_NUMERIC_IO_HPP_

#include <charconv>
#include <string>
#include <string_view>

#include "cole/errors.hpp"

namespace cole {

// Shortest decimal form that parses back to the same double. Locale never
// enters: std::to_chars always writes '.'.
inline std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ptr);
}

inline double parse_double(std::string_view s) {
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError("bad numeric field: '" + std::string(s) + "'");
  }
  return out;
}

inline long parse_long(std::string_view s) {
  long out = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError("bad integer field: '" + std::string(s) + "'");
  }
  return out;
}

}  // namespace cole

#endif  // COLE_NUMERIC_IO_HPP_
