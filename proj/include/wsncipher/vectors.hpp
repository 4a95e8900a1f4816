#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <ostream>
#include <string>

#include "wsncipher/cipher.hpp"

// Worked example: message "AB" under the one-byte key 'Z', every column of
// the encryption and decryption recomputed and compared with the frozen
// values below.
namespace wsnc::vectors {

struct encryption_row {
  char symbol;
  std::uint8_t value;
  const char* binary;
  const char* shuffled;
  const char* keyed;
  const char* complemented;
  std::uint8_t encrypted;
};

struct decryption_row {
  std::uint8_t value;
  const char* binary;
  const char* complemented;
  const char* keyed;
  const char* shuffled;
  char decrypted;
};

inline constexpr std::uint8_t key_value = 90;  // 'Z'
inline constexpr const char* key_binary = "01011010";
inline constexpr const char* key_shuffled = "10100101";

inline constexpr std::array<encryption_row, 2> encryption_rows{{
    {'A', 65, "01000001", "10000010", "00100111", "11011000", 216},
    {'B', 66, "01000010", "10000001", "00100100", "11011011", 219},
}};

inline constexpr std::array<decryption_row, 2> decryption_rows{{
    {216, "11011000", "00100111", "10000010", "01000001", 'A'},
    {219, "11011011", "00100100", "10000001", "01000010", 'B'},
}};

// Pluggable so a deliberately broken cipher can be run through the same check.
struct cipher_ops {
  std::function<encryption_trace(byte_view, const secret_key&)> encrypt = trace_encrypt;
  std::function<decryption_trace(byte_view, const secret_key&)> decrypt = trace_decrypt;
};

namespace detail {

inline std::string byte_bits(const bit_stream& s, std::size_t index) {
  std::string out;
  for (std::size_t b = 0; b < 8 && index * 8 + b < s.size(); ++b) out.push_back(s[index * 8 + b] ? '1' : '0');
  return out;
}

class checker {
 public:
  explicit checker(std::ostream& os) : os_(os) {}

  void cell(const std::string& got, const std::string& want) {
    os_ << ' ' << std::setw(9) << std::left << got;
    if (got != want) {
      ok_ = false;
      row_ok_ = false;
    }
  }

  void end_row() {
    os_ << (row_ok_ ? "  ok" : "  MISMATCH") << '\n';
    row_ok_ = true;
  }

  std::ostream& out() { return os_; }
  bool ok() const { return ok_; }

 private:
  std::ostream& os_;
  bool ok_ = true;
  bool row_ok_ = true;
};

}  // namespace detail

// Prints both tables; returns true iff every recomputed cell matches.
inline bool check(std::ostream& os, const cipher_ops& ops = {}) {
  const secret_key key(bytes{key_value});
  const bytes message{encryption_rows[0].value, encryption_rows[1].value};
  const bytes cipher{decryption_rows[0].value, decryption_rows[1].value};

  detail::checker c(os);
  const auto enc = ops.encrypt(message, key);

  os << "encryption, key 'Z'\n";
  os << " data key value C4        C5        C6        C7        C8\n";
  os << " -    Z   " << std::setw(5) << std::left << int(key_value);
  c.cell(detail::byte_bits(enc.key_bits, 0), key_binary);
  c.cell(detail::byte_bits(enc.key_shuffled, 0), key_shuffled);
  c.end_row();
  for (std::size_t i = 0; i < encryption_rows.size(); ++i) {
    const auto& row = encryption_rows[i];
    os << ' ' << row.symbol << "    -   " << std::setw(5) << std::left << int(row.value);
    c.cell(detail::byte_bits(enc.message_bits, i), row.binary);
    c.cell(detail::byte_bits(enc.message_shuffled, i), row.shuffled);
    c.cell(detail::byte_bits(enc.keyed, i), row.keyed);
    c.cell(detail::byte_bits(enc.complemented, i), row.complemented);
    c.cell(i < enc.ciphertext.size() ? std::to_string(enc.ciphertext[i]) : "-", std::to_string(row.encrypted));
    c.end_row();
  }

  const auto dec = ops.decrypt(cipher, key);
  os << "\ndecryption, key 'Z'\n";
  os << " value C4        C5        C6        C7        C8\n";
  os << " key  ";
  c.cell(detail::byte_bits(dec.key_bits, 0), key_binary);
  c.cell(detail::byte_bits(dec.key_shuffled, 0), key_shuffled);
  c.end_row();
  for (std::size_t i = 0; i < decryption_rows.size(); ++i) {
    const auto& row = decryption_rows[i];
    os << ' ' << std::setw(5) << std::left << int(row.value);
    c.cell(detail::byte_bits(dec.cipher_bits, i), row.binary);
    c.cell(detail::byte_bits(dec.complemented, i), row.complemented);
    c.cell(detail::byte_bits(dec.keyed, i), row.keyed);
    c.cell(detail::byte_bits(dec.unshuffled, i), row.shuffled);
    c.cell(i < dec.plaintext.size() ? std::string(1, static_cast<char>(dec.plaintext[i])) : "-",
           std::string(1, row.decrypted));
    c.end_row();
  }
  os << '\n' << (c.ok() ? "all cells match" : "vector mismatch") << '\n';
  return c.ok();
}

}  // namespace wsnc::vectors
