#pragma once

#include <cstdint>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wsncipher/wsncipher.hpp"

// Command implementations for the wsncipher tool. Kept out of main() so the
// test suites can drive them in-process.
namespace wsnc::cli {

enum exit_code : int { ok = 0, check_failed = 1, usage = 2, io_failure = 3, not_found = 4 };

// Accepts "1000000", "2.5", "1e6", "3/2".
inline std::optional<big_rational> parse_rational(const std::string& text) {
  auto digits = [](const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
  };
  if (auto slash = text.find('/'); slash != std::string::npos) {
    const auto num = text.substr(0, slash);
    const auto den = text.substr(slash + 1);
    if (!digits(num) || !digits(den) || big_int(den) == 0) return std::nullopt;
    return big_rational(big_int(num), big_int(den));
  }
  std::string mantissa = text;
  long exponent = 0;
  if (auto e = text.find_first_of("eE"); e != std::string::npos) {
    mantissa = text.substr(0, e);
    std::string ex = text.substr(e + 1);
    bool negative = false;
    if (!ex.empty() && (ex[0] == '+' || ex[0] == '-')) {
      negative = ex[0] == '-';
      ex.erase(0, 1);
    }
    if (!digits(ex) || ex.size() > 4) return std::nullopt;
    exponent = std::stol(ex) * (negative ? -1 : 1);
  }
  std::string whole = mantissa;
  std::string frac;
  if (auto dot = mantissa.find('.'); dot != std::string::npos) {
    whole = mantissa.substr(0, dot);
    frac = mantissa.substr(dot + 1);
  }
  if (whole.empty() && frac.empty()) return std::nullopt;
  if ((!whole.empty() && !digits(whole)) || (!frac.empty() && !digits(frac))) return std::nullopt;
  big_rational value(big_int(whole.empty() ? "0" : whole));
  if (!frac.empty()) {
    value += big_rational(big_int(frac), boost::multiprecision::pow(big_int(10), static_cast<unsigned>(frac.size())));
  }
  const big_int scale = boost::multiprecision::pow(big_int(10), static_cast<unsigned>(std::abs(exponent)));
  if (exponent >= 0) return big_rational(value * scale);
  return big_rational(value / scale);
}

inline std::string to_text(const big_rational& r) {
  if (boost::multiprecision::denominator(r) == 1) return boost::multiprecision::numerator(r).str();
  return boost::multiprecision::numerator(r).str() + "/" + boost::multiprecision::denominator(r).str();
}

inline std::optional<bytes> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  return bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

inline bool write_file(const std::string& path, byte_view data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return false;
  out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
  return static_cast<bool>(out);
}

struct transform_args {
  std::string in_path;
  std::optional<std::string> in_hex;
  std::string key_hex;
  std::string out_path;
};

inline int run_transform(const transform_args& a, bool encrypting, std::ostream& out, std::ostream& err) {
  std::optional<secret_key> key;
  bytes input;
  try {
    key.emplace(hex::decode(a.key_hex));
    if (a.in_hex) input = hex::decode(*a.in_hex);
  } catch (const error& e) {
    err << "error: " << e.what() << '\n';
    return usage;
  }
  if (!a.in_hex) {
    auto data = read_file(a.in_path);
    if (!data) {
      err << "error: cannot read " << a.in_path << '\n';
      return io_failure;
    }
    input = std::move(*data);
  }
  const bytes result = encrypting ? encrypt(input, *key) : decrypt(input, *key);
  if (!a.out_path.empty()) {
    if (!write_file(a.out_path, result)) {
      err << "error: cannot write " << a.out_path << '\n';
      return io_failure;
    }
  } else {
    out << hex::encode(result) << '\n';
  }
  return ok;
}

inline void add_transform(CLI::App& app, const char* name, const char* help, transform_args& a) {
  auto* sub = app.add_subcommand(name, help);
  auto* in = sub->add_option("--in", a.in_path, "input file (raw bytes)");
  auto* in_hex = sub->add_option("--in-hex", a.in_hex, "input as hex");
  in->excludes(in_hex);
  sub->add_option("--key-hex", a.key_hex, "key as hex, 1 to 32 bytes")->required();
  sub->add_option("--out", a.out_path, "output file; hex on stdout if omitted");
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Adaptive secret-key cipher for sensor telemetry"};
  app.require_subcommand(1, 1);

  transform_args enc_args;
  transform_args dec_args;
  add_transform(app, "encrypt", "encrypt bytes with a secret key", enc_args);
  add_transform(app, "decrypt", "decrypt bytes with a secret key", dec_args);

  std::size_t keygen_bytes = secret_key::deployment_bytes;
  std::optional<std::uint64_t> keygen_seed;
  auto* keygen = app.add_subcommand("keygen", "print a random key as hex");
  keygen->add_option("--key-bytes", keygen_bytes, "key length in bytes (1..32)");
  keygen->add_option("--seed", keygen_seed, "deterministic seed");

  unsigned estimate_bits = 64;
  std::string estimate_rate = "1000000";
  std::string estimate_mode = "average";
  auto* estimate = app.add_subcommand("estimate", "brute-force cost of a keyspace");
  estimate->add_option("--key-bits", estimate_bits, "key length in bits");
  estimate->add_option("--rate", estimate_rate, "keys tried per second");
  estimate->add_option("--mode", estimate_mode, "average or worst");

  std::string attack_plain;
  std::string attack_cipher;
  std::size_t attack_key_bytes = 1;
  bool attack_keystream = false;
  auto* attack = app.add_subcommand("attack", "recover a key from a known plaintext/ciphertext pair");
  attack->add_option("--plain-hex", attack_plain, "known plaintext")->required();
  attack->add_option("--cipher-hex", attack_cipher, "matching ciphertext")->required();
  attack->add_option("--key-bytes", attack_key_bytes, "key length to search (1..3)");
  attack->add_flag("--keystream", attack_keystream, "print the recovered keystream instead of searching");

  std::string sim_config_path;
  std::string sim_report_path;
  auto* simulate = app.add_subcommand("simulate", "run a network simulation");
  simulate->add_option("--config", sim_config_path, "simulation config JSON")->required();
  simulate->add_option("--report", sim_report_path, "report JSON path; stdout if omitted");

  auto* vectors = app.add_subcommand("vectors", "recompute the worked example tables");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return usage;
  }

  auto* sub = app.get_subcommands().front();

  if (sub->get_name() == "encrypt" || sub->get_name() == "decrypt") {
    auto& a = sub->get_name() == "encrypt" ? enc_args : dec_args;
    if (a.in_path.empty() && !a.in_hex) {
      err << "error: one of --in or --in-hex is required\n";
      return usage;
    }
    return run_transform(a, sub->get_name() == "encrypt", out, err);
  }

  if (sub == keygen) {
    if (keygen_bytes < 1 || keygen_bytes > secret_key::max_bytes) {
      err << "error: --key-bytes must be in 1..32\n";
      return usage;
    }
    bytes key(keygen_bytes);
    if (keygen_seed) {
      std::mt19937_64 rng(*keygen_seed);
      for (auto& b : key) b = static_cast<std::uint8_t>(rng() >> 56);
    } else {
      std::random_device rd;
      for (auto& b : key) b = static_cast<std::uint8_t>(rd());
    }
    out << hex::encode(key) << '\n';
    return ok;
  }

  if (sub == estimate) {
    const auto rate = parse_rational(estimate_rate);
    if (estimate_bits < 1 || estimate_bits > 4096) {
      err << "error: --key-bits must be in 1..4096\n";
      return usage;
    }
    if (!rate || *rate <= 0) {
      err << "error: --rate must be a positive number\n";
      return usage;
    }
    attack_mode mode;
    if (estimate_mode == "average") {
      mode = attack_mode::average;
    } else if (estimate_mode == "worst" || estimate_mode == "worst_case") {
      mode = attack_mode::worst_case;
    } else {
      err << "error: --mode must be average or worst\n";
      return usage;
    }
    const auto e = estimate_brute_force({estimate_bits, *rate, mode});
    out << "total_keys=" << e.total_keys.str() << '\n'
        << "seconds=" << to_text(e.seconds) << '\n'
        << "years_exact=" << to_text(e.years) << '\n'
        << "years=" << e.whole_years().str() << '\n';
    return ok;
  }

  if (sub == attack) {
    bytes plain;
    bytes cipher;
    try {
      plain = hex::decode(attack_plain);
      cipher = hex::decode(attack_cipher);
      if (attack_keystream) {
        out << hex::encode(bits_to_bytes(recover_keystream(plain, cipher))) << '\n';
        return ok;
      }
      auto key = exhaustive_search(plain, cipher, attack_key_bytes);
      if (!key) {
        out << "not found\n";
        return not_found;
      }
      out << hex::encode(key->data()) << '\n';
      return ok;
    } catch (const error& e) {
      err << "error: " << e.what() << '\n';
      return usage;
    }
  }

  if (sub == simulate) {
    sim::sim_config config;
    try {
      config = sim::load_config(sim_config_path);
    } catch (const std::exception& e) {
      err << "error: " << e.what() << '\n';
      return usage;
    }
    sim::sim_report report;
    try {
      report = sim::run_simulation(config);
    } catch (const error& e) {
      err << "error: " << e.what() << '\n';
      return usage;
    }
    const std::string text = sim::report_to_json(report).dump(2) + "\n";
    if (sim_report_path.empty()) {
      out << text;
    } else {
      std::ofstream f(sim_report_path);
      if (!(f << text)) {
        err << "error: cannot write " << sim_report_path << '\n';
        return io_failure;
      }
    }
    if (!report.fidelity_ok) {
      err << "fidelity check failed: " << report.total_rejected() << " frame(s) rejected\n";
      return check_failed;
    }
    return ok;
  }

  if (sub == vectors) {
    return vectors::check(out) ? ok : check_failed;
  }
  return usage;
}

}  // namespace wsnc::cli
