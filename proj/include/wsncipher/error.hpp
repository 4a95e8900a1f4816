#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wsnc {

// Every failure the library can signal. Codec and simulation errors are kept
// distinct so the fusion center can count rejections by kind.
enum class errc {
  non_byte_aligned,
  empty_key,
  key_too_long,
  length_mismatch,
  key_length_out_of_range,
  payload_too_large,
  bad_magic,
  unsupported_version,
  truncated,
  checksum_mismatch,
  too_many_readings,
  trailing_bytes,
  bad_kind,
  value_too_long,
  not_a_sensor,
  foreign_reading,
  broken_route,
  unknown_sink,
  decode_after_decrypt,
  invalid_config,
  invalid_hex,
};

constexpr std::string_view to_string(errc e) noexcept {
  switch (e) {
    case errc::non_byte_aligned: return "non_byte_aligned";
    case errc::empty_key: return "empty_key";
    case errc::key_too_long: return "key_too_long";
    case errc::length_mismatch: return "length_mismatch";
    case errc::key_length_out_of_range: return "key_length_out_of_range";
    case errc::payload_too_large: return "payload_too_large";
    case errc::bad_magic: return "bad_magic";
    case errc::unsupported_version: return "unsupported_version";
    case errc::truncated: return "truncated";
    case errc::checksum_mismatch: return "checksum_mismatch";
    case errc::too_many_readings: return "too_many_readings";
    case errc::trailing_bytes: return "trailing_bytes";
    case errc::bad_kind: return "bad_kind";
    case errc::value_too_long: return "value_too_long";
    case errc::not_a_sensor: return "not_a_sensor";
    case errc::foreign_reading: return "foreign_reading";
    case errc::broken_route: return "broken_route";
    case errc::unknown_sink: return "unknown_sink";
    case errc::decode_after_decrypt: return "decode_after_decrypt";
    case errc::invalid_config: return "invalid_config";
    case errc::invalid_hex: return "invalid_hex";
  }
  return "unknown";
}

class error : public std::runtime_error {
 public:
  explicit error(errc code, const std::string& what = {})
      : std::runtime_error(what.empty() ? std::string(to_string(code))
                                        : std::string(to_string(code)) + ": " + what),
        code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

}  // namespace wsnc
