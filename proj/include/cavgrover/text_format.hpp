#pragma once

#include <charconv>
#include <concepts>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>

namespace cavgrover {

/// Shortest round-trip decimal representation, independent of the C locale.
/// Negative zero prints as "0".
template <std::floating_point Real>
std::string format_real(Real value) {
  if (value == Real(0)) value = Real(0);
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof(buf), value);
  if (result.ec != std::errc{}) return "nan";
  return std::string(buf, result.ptr);
}

/// Parses a decimal written by format_real (or any plain decimal); throws
/// std::invalid_argument on trailing garbage.
inline double parse_real(std::string_view text) {
  double value = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  const auto result = std::from_chars(first, last, value);
  if (result.ec != std::errc{} || result.ptr != last)
    throw std::invalid_argument("not a decimal number: '" + std::string(text) + "'");
  return value;
}

}  // namespace cavgrover
