#pragma once

#include <charconv>
#include <cmath>
#include <string>

namespace cqmorph {

/// Shortest decimal string that parses back to exactly `x` (at most 17
/// significant digits). Infinities render as "inf" / "-inf", NaN as "nan".
/// Locale independent.
inline std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

/// Inverse of format_real; accepts "inf", "+inf", "-inf".
double parse_real(const std::string& s);

}  // namespace cqmorph
