#pragma once

// Derivation of per-step keys from a master secret, the deterministic
// generators that turn those keys into concrete transform draws, and the
// JSON key-file format used by the CLI.

#include <sys/stat.h>

#include <array>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "etcjpeg/chacha20.hpp"
#include "etcjpeg/color.hpp"
#include "etcjpeg/errors.hpp"
#include "etcjpeg/util.hpp"

namespace etcjpeg {

using SubKey = std::array<std::uint8_t, 32>;
using Nonce = std::array<std::uint8_t, 12>;

// One independent 256-bit key per cipher step: k1 drives the block
// permutation, k2 the rotations/flips, k3 the negative-positive bits,
// k4 the channel shuffles.
struct StepKeys {
  SubKey k1, k2, k3, k4;
};

inline StepKeys derive_step_keys(const SubKey& master, const Nonce& nonce) {
  ChaCha20Stream stream(master, nonce);
  StepKeys keys;
  for (SubKey* k : {&keys.k1, &keys.k2, &keys.k3, &keys.k4})
    for (auto& b : *k) b = stream.next_byte();
  return keys;
}

// Each generator reads an independent stream keyed by its subkey with an
// all-zero nonce, so draws for one step never depend on another step's.
inline ChaCha20Stream step_stream(const SubKey& key) {
  return ChaCha20Stream(key, Nonce{});
}

// Permutation of n block positions. Semantics: scrambled slot i receives
// the block from original position perm[i].
inline std::vector<std::uint32_t> gen_permutation(const SubKey& k1, std::size_t n) {
  if (n == 0) throw Error(ErrorCode::empty_domain, "permutation of zero blocks");
  std::vector<std::uint32_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0u);
  auto stream = step_stream(k1);
  fisher_yates(perm, stream);
  return perm;
}

// n pose indices, each uniform over the 8 square symmetries.
inline std::vector<int> gen_poses(const SubKey& k2, std::size_t n) {
  if (n == 0) throw Error(ErrorCode::empty_domain, "pose list of zero blocks");
  auto stream = step_stream(k2);
  std::vector<int> poses(n);
  for (auto& p : poses) p = static_cast<int>(stream.uniform(8));
  return poses;
}

// n independent bits with P(1) = 1/2.
inline std::vector<int> gen_polarity(const SubKey& k3, std::size_t n) {
  if (n == 0) throw Error(ErrorCode::empty_domain, "polarity list of zero blocks");
  auto stream = step_stream(k3);
  std::vector<int> bits(n);
  for (auto& b : bits) b = static_cast<int>(stream.next_bit());
  return bits;
}

// The 6 permutations of {0,1,2} in lexicographic order; new plane c takes
// old plane perm[c].
inline constexpr std::array<std::array<int, 3>, 6> kChannelPerms = {{
    {{0, 1, 2}}, {{0, 2, 1}}, {{1, 0, 2}}, {{1, 2, 0}}, {{2, 0, 1}}, {{2, 1, 0}},
}};

inline std::vector<int> gen_channel_perms(const SubKey& k4, std::size_t n) {
  if (n == 0) throw Error(ErrorCode::empty_domain, "channel-perm list of zero blocks");
  auto stream = step_stream(k4);
  std::vector<int> perms(n);
  for (auto& p : perms) p = static_cast<int>(stream.uniform(6));
  return perms;
}

// Everything the CLI persists about a key: the secret material plus the
// cipher configuration it was generated for. original size [0,0] means
// "not bound to a specific image size".
struct KeyFile {
  SubKey master{};
  Nonce nonce{};
  std::string scheme = "grayscale";  // "conventional" | "grayscale"
  int block_w = 8, block_h = 8;
  PlaneLayout::Tag layout = PlaneLayout::Tag::horizontal;
  int original_w = 0, original_h = 0;
};

inline void validate_scheme(const std::string& scheme) {
  if (scheme != "conventional" && scheme != "grayscale")
    throw Error(ErrorCode::key, "unknown scheme '" + scheme + "'");
}

inline void save_key_file(const std::string& path, const KeyFile& kf) {
  validate_scheme(kf.scheme);
  nlohmann::json j;
  j["master_b64"] = base64_encode(kf.master.data(), kf.master.size());
  j["nonce_b64"] = base64_encode(kf.nonce.data(), kf.nonce.size());
  j["scheme"] = kf.scheme;
  j["block"] = {kf.block_w, kf.block_h};
  j["layout"] = layout_name(kf.layout);
  j["original_size"] = {kf.original_w, kf.original_h};
  {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::io, "cannot write key file '" + path + "'");
    out << j.dump(2) << '\n';
  }
  ::chmod(path.c_str(), S_IRUSR);  // secret material: owner-read-only
}

inline KeyFile load_key_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot read key file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::key, std::string("malformed key file: ") + e.what());
  }
  KeyFile kf;
  try {
    auto master = base64_decode(j.at("master_b64").get<std::string>());
    auto nonce = base64_decode(j.at("nonce_b64").get<std::string>());
    if (master.size() != kf.master.size() || nonce.size() != kf.nonce.size())
      throw Error(ErrorCode::key, "key material has wrong length");
    std::copy(master.begin(), master.end(), kf.master.begin());
    std::copy(nonce.begin(), nonce.end(), kf.nonce.begin());
    kf.scheme = j.at("scheme").get<std::string>();
    validate_scheme(kf.scheme);
    kf.block_w = j.at("block").at(0).get<int>();
    kf.block_h = j.at("block").at(1).get<int>();
    kf.layout = layout_from_name(j.at("layout").get<std::string>());
    kf.original_w = j.at("original_size").at(0).get<int>();
    kf.original_h = j.at("original_size").at(1).get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::key, std::string("malformed key file: ") + e.what());
  }
  if (kf.block_w < 1 || kf.block_h < 1)
    throw Error(ErrorCode::key, "key file block size must be positive");
  return kf;
}

// Deterministic key material from a hex seed: the seed (zero-padded or
// truncated to 32 bytes) keys a stream whose first 44 bytes become the
// master key and nonce. Intended for tests and reproducible experiments.
inline void seed_key_material(const std::string& seed_hex, SubKey& master, Nonce& nonce) {
  std::vector<std::uint8_t> seed = from_hex(seed_hex);
  SubKey padded{};
  for (std::size_t i = 0; i < padded.size() && i < seed.size(); ++i) padded[i] = seed[i];
  ChaCha20Stream stream(padded, Nonce{});
  for (auto& b : master) b = stream.next_byte();
  for (auto& b : nonce) b = stream.next_byte();
}

inline void random_key_material(SubKey& master, Nonce& nonce) {
  std::random_device rd;
  auto fill = [&rd](std::uint8_t* p, std::size_t n) {
    for (std::size_t i = 0; i < n; i += 4) {
      std::uint32_t v = rd();
      for (std::size_t k = 0; k < 4 && i + k < n; ++k)
        p[i + k] = static_cast<std::uint8_t>(v >> (8 * k));
    }
  };
  fill(master.data(), master.size());
  fill(nonce.data(), nonce.size());
}

// Per-trial key variation: replace the last four nonce bytes with the
// little-endian trial index so each trial is an independently keyed run.
inline Nonce nonce_for_trial(const Nonce& base, std::uint32_t trial) {
  Nonce n = base;
  for (int i = 0; i < 4; ++i) n[8 + i] = static_cast<std::uint8_t>(trial >> (8 * i));
  return n;
}

}  // namespace etcjpeg
