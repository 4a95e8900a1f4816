#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "wsncipher/bitstream.hpp"
#include "wsncipher/cipher.hpp"
#include "wsncipher/error.hpp"

namespace wsnc {

using big_int = boost::multiprecision::cpp_int;
using big_rational = boost::multiprecision::cpp_rational;

enum class attack_mode { average, worst_case };

inline constexpr std::uint64_t seconds_per_year = 86400ull * 365ull;

struct attack_model {
  unsigned key_length_bits = 64;
  big_rational keys_per_second{1000000};
  attack_mode mode = attack_mode::average;
};

struct brute_force_estimate {
  big_int total_keys;
  big_rational seconds;
  big_rational years;

  big_int whole_years() const {
    return boost::multiprecision::numerator(years) / boost::multiprecision::denominator(years);
  }
};

// Exact keyspace arithmetic. An average attack covers half the keyspace; a
// year is 365 days.
inline brute_force_estimate estimate_brute_force(const attack_model& model) {
  if (model.key_length_bits == 0) throw std::invalid_argument("key_length_bits must be >= 1");
  if (model.keys_per_second <= 0) throw std::invalid_argument("keys_per_second must be > 0");

  brute_force_estimate e;
  e.total_keys = big_int(1) << model.key_length_bits;
  big_rational searched(e.total_keys);
  if (model.mode == attack_mode::average) searched /= 2;
  e.seconds = searched / model.keys_per_second;
  e.years = e.seconds / big_rational(seconds_per_year);
  return e;
}

// Known-plaintext recovery. Swap commutes with XOR and complement, so
// swap(~c) = p ^ k_repeated at the bit level.
inline bit_stream recover_keystream(byte_view known_plaintext, byte_view ciphertext) {
  if (known_plaintext.size() != ciphertext.size()) {
    throw error(errc::length_mismatch, std::to_string(known_plaintext.size()) + " vs " +
                                           std::to_string(ciphertext.size()));
  }
  if (known_plaintext.empty()) throw error(errc::length_mismatch, "empty input");
  return key_directed_xor(complement(adjacent_swap(bytes_to_bits(ciphertext))),
                          bytes_to_bits(known_plaintext));
}

inline constexpr std::size_t max_search_key_bytes = 3;

namespace detail {

inline bytes key_from_index(std::uint32_t index, std::size_t n) {
  bytes k(n);
  for (std::size_t i = 0; i < n; ++i) {
    k[n - 1 - i] = static_cast<std::uint8_t>(index >> (8 * i));
  }
  return k;
}

inline bool key_matches(byte_view p, byte_view c, const bytes& k) {
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto out = static_cast<std::uint8_t>(
        ~(swap_adjacent_bits(p[i]) ^ swap_adjacent_bits(k[i % k.size()])));
    if (out != c[i]) return false;
  }
  return true;
}

}  // namespace detail

// Tries every key of the given length in lexicographic order and returns the
// smallest one reproducing the ciphertext. Work is split by leading key byte
// across threads; the result does not depend on scheduling.
inline std::optional<secret_key> exhaustive_search(byte_view known_plaintext, byte_view ciphertext,
                                                   std::size_t key_length_bytes,
                                                   unsigned workers = 0) {
  if (key_length_bytes < 1 || key_length_bytes > max_search_key_bytes) {
    throw error(errc::key_length_out_of_range, std::to_string(key_length_bytes));
  }
  if (known_plaintext.size() != ciphertext.size() || known_plaintext.size() < key_length_bytes) {
    throw error(errc::length_mismatch);
  }

  const std::uint32_t total = 1u << (8 * key_length_bytes);
  const std::uint32_t slices = 256;
  const std::uint32_t slice_size = total / slices;

  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  if (key_length_bytes == 1) workers = 1;
  workers = std::min(workers, slices);

  constexpr auto none = std::numeric_limits<std::uint32_t>::max();
  std::atomic<std::uint32_t> best{none};
  std::atomic<std::uint32_t> next_slice{0};

  auto scan = [&] {
    bytes k(key_length_bytes);
    for (;;) {
      const std::uint32_t s = next_slice.fetch_add(1);
      if (s >= slices) return;
      const std::uint32_t lo = s * slice_size;
      if (lo >= best.load()) return;
      for (std::uint32_t idx = lo; idx < lo + slice_size; ++idx) {
        k = detail::key_from_index(idx, key_length_bytes);
        if (detail::key_matches(known_plaintext, ciphertext, k)) {
          std::uint32_t cur = best.load();
          while (idx < cur && !best.compare_exchange_weak(cur, idx)) {
          }
          break;
        }
      }
    }
  };

  if (workers == 1) {
    scan();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(scan);
  }

  if (best.load() == none) return std::nullopt;
  secret_key found(detail::key_from_index(best.load(), key_length_bytes));
  if (encrypt(known_plaintext, found) != bytes(ciphertext.begin(), ciphertext.end())) {
    throw std::logic_error("exhaustive_search: candidate failed re-encryption");
  }
  return found;
}

}  // namespace wsnc
