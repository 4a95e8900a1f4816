#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "wsncipher/bitstream.hpp"
#include "wsncipher/error.hpp"

// Sink to fusion-center framing. All integers big-endian.
//
//   0  magic      0xa5 0x5a
//   2  version    0x01
//   3  sink_id    u16
//   5  sequence   u32
//   9  length     u16
//  11  payload    `length` bytes
//   .  checksum   XOR of every preceding byte
//
// The checksum catches any single-bit error and little else. Headers are not
// encrypted; the receiver needs sink_id to pick the decryption key.
namespace wsnc::wire {

inline constexpr std::uint8_t magic0 = 0xa5;
inline constexpr std::uint8_t magic1 = 0x5a;
inline constexpr std::uint8_t version = 0x01;
inline constexpr std::size_t header_size = 11;
inline constexpr std::size_t frame_overhead = header_size + 1;
inline constexpr std::size_t max_payload = 0xffff;

struct frame {
  std::uint16_t sink_id = 0;
  std::uint32_t sequence = 0;
  bytes payload{};
  std::uint8_t checksum = 0;  // filled by encode/decode

  // Checksum is derived, so it does not take part in equality.
  friend bool operator==(const frame& a, const frame& b) {
    return a.sink_id == b.sink_id && a.sequence == b.sequence && a.payload == b.payload;
  }
};

enum class sensor_kind : std::uint8_t { scalar = 0, audio = 1, video = 2 };

inline constexpr std::string_view to_string(sensor_kind k) noexcept {
  switch (k) {
    case sensor_kind::scalar: return "scalar";
    case sensor_kind::audio: return "audio";
    case sensor_kind::video: return "video";
  }
  return "?";
}

struct sensor_reading {
  std::uint16_t node_id = 0;
  std::uint32_t timestamp = 0;
  sensor_kind kind = sensor_kind::scalar;
  bytes value{};  // at most 255 bytes

  friend bool operator==(const sensor_reading&, const sensor_reading&) = default;
  friend auto operator<=>(const sensor_reading&, const sensor_reading&) = default;
};

inline constexpr std::size_t reading_header_size = 8;
inline constexpr std::size_t max_value_size = 0xff;
inline constexpr std::size_t max_readings = 0xffff;

namespace detail {

inline void put_u16(bytes& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

inline void put_u32(bytes& out, std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) out.push_back(static_cast<std::uint8_t>(v >> shift));
}

inline std::uint16_t get_u16(byte_view in, std::size_t at) {
  return static_cast<std::uint16_t>((in[at] << 8) | in[at + 1]);
}

inline std::uint32_t get_u32(byte_view in, std::size_t at) {
  return (std::uint32_t{in[at]} << 24) | (std::uint32_t{in[at + 1]} << 16) |
         (std::uint32_t{in[at + 2]} << 8) | std::uint32_t{in[at + 3]};
}

inline std::uint8_t xor_fold(byte_view data) {
  std::uint8_t x = 0;
  for (auto b : data) x ^= b;
  return x;
}

}  // namespace detail

inline bytes encode_frame(const frame& f) {
  if (f.payload.size() > max_payload) {
    throw error(errc::payload_too_large, std::to_string(f.payload.size()) + " bytes");
  }
  bytes out;
  out.reserve(frame_overhead + f.payload.size());
  out.push_back(magic0);
  out.push_back(magic1);
  out.push_back(version);
  detail::put_u16(out, f.sink_id);
  detail::put_u32(out, f.sequence);
  detail::put_u16(out, static_cast<std::uint16_t>(f.payload.size()));
  out.insert(out.end(), f.payload.begin(), f.payload.end());
  out.push_back(detail::xor_fold(out));
  return out;
}

inline frame decode_frame(byte_view data) {
  if (data.size() < 2) throw error(errc::truncated, "no magic");
  if (data[0] != magic0 || data[1] != magic1) throw error(errc::bad_magic);
  if (data.size() < 3) throw error(errc::truncated, "no version");
  if (data[2] != version) throw error(errc::unsupported_version, std::to_string(data[2]));
  if (data.size() < frame_overhead) throw error(errc::truncated, "short header");

  const std::size_t length = detail::get_u16(data, 9);
  const std::size_t expected = frame_overhead + length;
  if (data.size() < expected) throw error(errc::truncated, "payload shorter than declared");
  if (data.size() > expected) throw error(errc::trailing_bytes, "frame longer than declared");
  if (detail::xor_fold(data.first(expected - 1)) != data[expected - 1]) {
    throw error(errc::checksum_mismatch);
  }

  frame f;
  f.sink_id = detail::get_u16(data, 3);
  f.sequence = detail::get_u32(data, 5);
  f.payload.assign(data.begin() + header_size, data.begin() + static_cast<std::ptrdiff_t>(header_size + length));
  f.checksum = data[expected - 1];
  return f;
}

// Batch: u16 count, then per record node_id u16 | timestamp u32 | kind u8 |
// value_length u8 | value.
inline bytes encode_readings(const std::vector<sensor_reading>& readings) {
  if (readings.size() > max_readings) {
    throw error(errc::too_many_readings, std::to_string(readings.size()));
  }
  bytes out;
  detail::put_u16(out, static_cast<std::uint16_t>(readings.size()));
  for (const auto& r : readings) {
    if (static_cast<std::uint8_t>(r.kind) > 2) throw error(errc::bad_kind);
    if (r.value.size() > max_value_size) {
      throw error(errc::value_too_long, std::to_string(r.value.size()) + " bytes");
    }
    detail::put_u16(out, r.node_id);
    detail::put_u32(out, r.timestamp);
    out.push_back(static_cast<std::uint8_t>(r.kind));
    out.push_back(static_cast<std::uint8_t>(r.value.size()));
    out.insert(out.end(), r.value.begin(), r.value.end());
  }
  return out;
}

inline std::vector<sensor_reading> decode_readings(byte_view data) {
  if (data.size() < 2) throw error(errc::truncated, "no count");
  const std::size_t count = detail::get_u16(data, 0);
  std::vector<sensor_reading> out;
  out.reserve(count);
  std::size_t at = 2;
  for (std::size_t n = 0; n < count; ++n) {
    if (data.size() - at < reading_header_size) throw error(errc::truncated, "record header");
    sensor_reading r;
    r.node_id = detail::get_u16(data, at);
    r.timestamp = detail::get_u32(data, at + 2);
    const std::uint8_t kind = data[at + 6];
    if (kind > 2) throw error(errc::bad_kind, std::to_string(kind));
    r.kind = static_cast<sensor_kind>(kind);
    const std::size_t len = data[at + 7];
    at += reading_header_size;
    if (data.size() - at < len) throw error(errc::truncated, "record value");
    r.value.assign(data.begin() + static_cast<std::ptrdiff_t>(at),
                   data.begin() + static_cast<std::ptrdiff_t>(at + len));
    at += len;
    out.push_back(std::move(r));
  }
  if (at != data.size()) throw error(errc::trailing_bytes, std::to_string(data.size() - at) + " bytes");
  return out;
}

}  // namespace wsnc::wire
