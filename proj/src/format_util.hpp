#pragma once

#include <charconv>
#include <cstdint>
#include <stdexcept>
#include <string>

// Shortest round-trip decimal formatting. CSV outputs must be byte-stable
// across worker counts and platforms, so all floating-point fields go
// through here instead of iostreams.

namespace entrench::detail {

inline void append_number(std::string& out, double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  if (res.ec != std::errc{}) throw std::runtime_error("number formatting failed");
  out.append(buf, res.ptr);
}

inline void append_number(std::string& out, std::uint64_t v) {
  char buf[24];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, res.ptr);
}

inline std::string format_number(double v) {
  std::string s;
  append_number(s, v);
  return s;
}

}  // namespace entrench::detail
