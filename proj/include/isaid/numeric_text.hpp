#pragma once

#include <charconv>
#include <string>
#include <string_view>
#include <system_error>

namespace isaid {

/// Shortest decimal text that parses back to the identical double.
inline std::string format_double(double value) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return ec == std::errc{} ? std::string(buf, end) : std::string("nan");
}

/// Parses the whole of `text` as a double; false on trailing junk or overflow.
inline bool parse_double(std::string_view text, double& out) {
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc{} && ptr == text.data() + text.size();
}

}  // namespace isaid
