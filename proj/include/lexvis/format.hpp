#pragma once

#include <charconv>
#include <cmath>
#include <string>
#include <string_view>
#include <system_error>

#include "lexvis/error.hpp"

namespace lexvis {

// Shortest decimal representation that parses back to the same double.
inline std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline bool try_parse_double(std::string_view s, double& out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto res = std::from_chars(first, last, out);
  return res.ec == std::errc() && res.ptr == last;
}

inline double parse_double(std::string_view s, std::string_view context = "") {
  double v = 0.0;
  if (!try_parse_double(s, v)) {
    throw DataError("unparsable float '" + std::string(s) + "'" +
                    (context.empty() ? "" : " (" + std::string(context) + ")"));
  }
  return v;
}

inline double parse_finite_double(std::string_view s, std::string_view context = "") {
  double v = parse_double(s, context);
  if (!std::isfinite(v)) {
    throw DataError("non-finite value '" + std::string(s) + "'" +
                    (context.empty() ? "" : " (" + std::string(context) + ")"));
  }
  return v;
}

// ASCII lowercase; non-ASCII bytes pass through unchanged.
inline std::string to_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

}  // namespace lexvis
