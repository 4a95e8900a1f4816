#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "wsncipher/bitstream.hpp"
#include "wsncipher/error.hpp"

namespace wsnc::hex {

inline std::string encode(byte_view data) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out;
  out.reserve(data.size() * 2);
  for (std::uint8_t b : data) {
    out.push_back(digits[b >> 4]);
    out.push_back(digits[b & 0x0f]);
  }
  return out;
}

namespace detail {
constexpr int nibble(char c) noexcept {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}
}  // namespace detail

// Case-insensitive. Odd digit counts and non-hex characters are rejected.
inline bytes decode(std::string_view text) {
  if (text.size() % 2 != 0) throw error(errc::invalid_hex, "odd number of digits");
  bytes out;
  out.reserve(text.size() / 2);
  for (std::size_t i = 0; i < text.size(); i += 2) {
    const int hi = detail::nibble(text[i]);
    const int lo = detail::nibble(text[i + 1]);
    if (hi < 0 || lo < 0) throw error(errc::invalid_hex, "bad digit at offset " + std::to_string(i));
    out.push_back(static_cast<std::uint8_t>((hi << 4) | lo));
  }
  return out;
}

}  // namespace wsnc::hex
