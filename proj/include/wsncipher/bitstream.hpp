#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wsncipher/error.hpp"

namespace wsnc {

using bytes = std::vector<std::uint8_t>;
using byte_view = std::span<const std::uint8_t>;

// Ordered sequence of binary digits. Streams built from bytes are MSB-first
// within each byte, so 0x5a unpacks to 0,1,0,1,1,0,1,0.
class bit_stream {
 public:
  bit_stream() = default;

  bit_stream(std::initializer_list<int> bits) {
    bits_.reserve(bits.size());
    for (int b : bits) bits_.push_back(static_cast<std::uint8_t>(b & 1));
  }

  explicit bit_stream(std::size_t n, bool value = false) : bits_(n, value ? 1 : 0) {}

  // Parses "0101 1010"; whitespace is ignored, anything else rejected.
  static bit_stream parse(std::string_view text) {
    bit_stream out;
    for (char c : text) {
      if (c == '0' || c == '1') {
        out.bits_.push_back(static_cast<std::uint8_t>(c - '0'));
      } else if (c != ' ' && c != '\t' && c != '\n') {
        throw std::invalid_argument("bit_stream::parse: unexpected character");
      }
    }
    return out;
  }

  std::size_t size() const noexcept { return bits_.size(); }
  bool empty() const noexcept { return bits_.empty(); }

  bool operator[](std::size_t i) const noexcept { return bits_[i] != 0; }
  void set(std::size_t i, bool v) noexcept { bits_[i] = v ? 1 : 0; }
  void push_back(bool v) { bits_.push_back(v ? 1 : 0); }

  auto begin() const noexcept { return bits_.begin(); }
  auto end() const noexcept { return bits_.end(); }

  // Groups of eight separated by a space, e.g. "01000001 01000010".
  std::string to_string() const {
    std::string s;
    s.reserve(bits_.size() + bits_.size() / 8);
    for (std::size_t i = 0; i < bits_.size(); ++i) {
      if (i != 0 && i % 8 == 0) s.push_back(' ');
      s.push_back(bits_[i] ? '1' : '0');
    }
    return s;
  }

  friend bool operator==(const bit_stream&, const bit_stream&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

inline bit_stream bytes_to_bits(byte_view data) {
  bit_stream out(data.size() * 8);
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (int b = 0; b < 8; ++b) {
      out.set(i * 8 + static_cast<std::size_t>(b), ((data[i] >> (7 - b)) & 1u) != 0);
    }
  }
  return out;
}

inline bytes bits_to_bytes(const bit_stream& bits) {
  if (bits.size() % 8 != 0) {
    throw error(errc::non_byte_aligned, std::to_string(bits.size()) + " bits");
  }
  bytes out(bits.size() / 8, 0);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i]) out[i / 8] |= static_cast<std::uint8_t>(0x80u >> (i % 8));
  }
  return out;
}

// Interchanges the bits at indices 2i and 2i+1. An unpaired trailing bit of an
// odd-length stream stays where it is.
inline bit_stream adjacent_swap(const bit_stream& bits) {
  bit_stream out = bits;
  for (std::size_t i = 0; i + 1 < bits.size(); i += 2) {
    out.set(i, bits[i + 1]);
    out.set(i + 1, bits[i]);
  }
  return out;
}

// Flips message[i] wherever key[i mod |key|] is set; the key cycles when the
// message is longer.
inline bit_stream key_directed_xor(const bit_stream& message, const bit_stream& key) {
  if (key.empty()) throw error(errc::empty_key);
  bit_stream out(message.size());
  for (std::size_t i = 0; i < message.size(); ++i) {
    out.set(i, message[i] != key[i % key.size()]);
  }
  return out;
}

inline bit_stream complement(const bit_stream& bits) {
  bit_stream out(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) out.set(i, !bits[i]);
  return out;
}

// Byte-level form of adjacent_swap for one byte.
constexpr std::uint8_t swap_adjacent_bits(std::uint8_t b) noexcept {
  return static_cast<std::uint8_t>(((b & 0xaau) >> 1) | ((b & 0x55u) << 1));
}

}  // namespace wsnc
