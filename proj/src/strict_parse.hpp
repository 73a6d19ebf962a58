#pragma once

#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>

#include "mexp/errors.hpp"

namespace mexp::detail {

// Strict decimal: optional '-', then one or more digits, nothing else.
inline bool is_strict_decimal(std::string_view s, bool allow_sign = true) {
  if (allow_sign && !s.empty() && s.front() == '-') s.remove_prefix(1);
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

inline std::int64_t parse_int64(std::string_view s, std::string_view what) {
  std::int64_t v = 0;
  if (!is_strict_decimal(s)) throw ConfigError(std::string(what) + ": expected a decimal integer, got '" + std::string(s) + "'");
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ConfigError(std::string(what) + ": integer out of range '" + std::string(s) + "'");
  return v;
}

}  // namespace mexp::detail
