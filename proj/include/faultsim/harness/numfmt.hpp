#pragma once

#include <charconv>
#include <string>
#include <string_view>
#include <system_error>

#include "faultsim/errors.hpp"

namespace faultsim::harness {

// Shortest decimal representation that round-trips the double exactly.
inline std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) throw NumericalError("format_double: to_chars failed");
  return std::string(buf, ptr);
}

inline double parse_double(std::string_view s) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last)
    throw ConfigError("not a number: '" + std::string(s) + "'");
  return v;
}

}  // namespace faultsim::harness
