#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "wsncipher/bitstream.hpp"
#include "wsncipher/error.hpp"

namespace wsnc {

// Key shared by one sink and the fusion center. Deployments use 8 bytes.
class secret_key {
 public:
  static constexpr std::size_t max_bytes = 32;
  static constexpr std::size_t deployment_bytes = 8;

  explicit secret_key(bytes key) : bytes_(std::move(key)) {
    if (bytes_.empty()) throw error(errc::empty_key);
    if (bytes_.size() > max_bytes) {
      throw error(errc::key_too_long, std::to_string(bytes_.size()) + " bytes");
    }
  }

  byte_view data() const noexcept { return bytes_; }
  const bytes& raw() const noexcept { return bytes_; }
  std::size_t size() const noexcept { return bytes_.size(); }

  // Key bits after the adjacent-bit shuffle; this is what gets combined with
  // the message.
  bit_stream shuffled_bits() const { return adjacent_swap(bytes_to_bits(bytes_)); }

  friend bool operator==(const secret_key&, const secret_key&) = default;
  friend auto operator<=>(const secret_key&, const secret_key&) = default;

 private:
  bytes bytes_;
};

// Every intermediate column of one encryption, whole message at a time.
struct encryption_trace {
  bit_stream key_bits;         // key as bits
  bit_stream key_shuffled;     // after adjacent swap
  bit_stream message_bits;     // plaintext as bits
  bit_stream message_shuffled; // after adjacent swap
  bit_stream keyed;            // after key-directed XOR
  bit_stream complemented;     // after XOR with 1
  bytes ciphertext;
};

struct decryption_trace {
  bit_stream key_bits;
  bit_stream key_shuffled;
  bit_stream cipher_bits;
  bit_stream complemented;
  bit_stream keyed;
  bit_stream unshuffled;
  bytes plaintext;
};

inline encryption_trace trace_encrypt(byte_view plaintext, const secret_key& key) {
  encryption_trace t;
  t.key_bits = bytes_to_bits(key.data());
  t.key_shuffled = adjacent_swap(t.key_bits);
  t.message_bits = bytes_to_bits(plaintext);
  t.message_shuffled = adjacent_swap(t.message_bits);
  t.keyed = key_directed_xor(t.message_shuffled, t.key_shuffled);
  t.complemented = complement(t.keyed);
  t.ciphertext = bits_to_bytes(t.complemented);
  return t;
}

inline decryption_trace trace_decrypt(byte_view ciphertext, const secret_key& key) {
  decryption_trace t;
  t.key_bits = bytes_to_bits(key.data());
  t.key_shuffled = adjacent_swap(t.key_bits);
  t.cipher_bits = bytes_to_bits(ciphertext);
  t.complemented = complement(t.cipher_bits);
  t.keyed = key_directed_xor(t.complemented, t.key_shuffled);
  t.unshuffled = adjacent_swap(t.keyed);
  t.plaintext = bits_to_bytes(t.unshuffled);
  return t;
}

// Bit-stream pipeline, one operation per stage. Slow; used for traces and as
// a cross-check of the byte path below.
inline bytes encrypt_bitwise(byte_view plaintext, const secret_key& key) {
  return bits_to_bytes(complement(
      key_directed_xor(adjacent_swap(bytes_to_bits(plaintext)), key.shuffled_bits())));
}

inline bytes decrypt_bitwise(byte_view ciphertext, const secret_key& key) {
  return bits_to_bytes(adjacent_swap(
      key_directed_xor(complement(bytes_to_bits(ciphertext)), key.shuffled_bits())));
}

// Since keys are whole bytes the shuffled key stream repeats on byte
// boundaries, so each output byte is ~(swap(p[i]) ^ swap(k[i mod n])).
inline bytes encrypt(byte_view plaintext, const secret_key& key) {
  const auto k = key.data();
  bytes out(plaintext.size());
  for (std::size_t i = 0; i < plaintext.size(); ++i) {
    out[i] = static_cast<std::uint8_t>(
        ~(swap_adjacent_bits(plaintext[i]) ^ swap_adjacent_bits(k[i % k.size()])));
  }
  return out;
}

inline bytes decrypt(byte_view ciphertext, const secret_key& key) {
  const auto k = key.data();
  bytes out(ciphertext.size());
  for (std::size_t i = 0; i < ciphertext.size(); ++i) {
    const auto keyed = static_cast<std::uint8_t>(~ciphertext[i] ^ swap_adjacent_bits(k[i % k.size()]));
    out[i] = swap_adjacent_bits(keyed);
  }
  return out;
}

}  // namespace wsnc
