#ifndef DYNDIV_TEXT_HPP
#define DYNDIV_TEXT_HPP

#include <charconv>
#include <string>
#include <system_error>

namespace dyndiv {

/// Shortest decimal text that round-trips to the same double.
inline std::string format_real(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  if (res.ec != std::errc{}) return "nan";
  return std::string(buf, res.ptr);
}

}  // namespace dyndiv

#endif  // DYNDIV_TEXT_HPP
