#pragma once

// ChaCha20 stream cipher (IETF variant, RFC 8439): 256-bit key, 96-bit
// nonce, 32-bit block counter starting at 0. Used here purely as a
// deterministic pseudorandom generator, never for confidentiality of the
// keystream itself.

#include <array>
#include <cstdint>
#include <cstring>
#include <vector>

#include "etcjpeg/errors.hpp"

namespace etcjpeg {

namespace detail {

inline std::uint32_t rotl32(std::uint32_t v, int n) {
  return (v << n) | (v >> (32 - n));
}

inline void quarter_round(std::uint32_t& a, std::uint32_t& b, std::uint32_t& c,
                          std::uint32_t& d) {
  a += b; d ^= a; d = rotl32(d, 16);
  c += d; b ^= c; b = rotl32(b, 12);
  a += b; d ^= a; d = rotl32(d, 8);
  c += d; b ^= c; b = rotl32(b, 7);
}

inline std::uint32_t load_le32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

inline void store_le32(std::uint8_t* p, std::uint32_t v) {
  p[0] = static_cast<std::uint8_t>(v);
  p[1] = static_cast<std::uint8_t>(v >> 8);
  p[2] = static_cast<std::uint8_t>(v >> 16);
  p[3] = static_cast<std::uint8_t>(v >> 24);
}

}  // namespace detail

// One 64-byte keystream block for the given key/nonce/counter.
inline std::array<std::uint8_t, 64> chacha20_block(
    const std::array<std::uint8_t, 32>& key, const std::array<std::uint8_t, 12>& nonce,
    std::uint32_t counter) {
  std::uint32_t state[16];
  state[0] = 0x61707865u;
  state[1] = 0x3320646eu;
  state[2] = 0x79622d32u;
  state[3] = 0x6b206574u;
  for (int i = 0; i < 8; ++i) state[4 + i] = detail::load_le32(key.data() + 4 * i);
  state[12] = counter;
  for (int i = 0; i < 3; ++i) state[13 + i] = detail::load_le32(nonce.data() + 4 * i);

  std::uint32_t w[16];
  std::memcpy(w, state, sizeof(w));
  for (int round = 0; round < 10; ++round) {
    detail::quarter_round(w[0], w[4], w[8], w[12]);
    detail::quarter_round(w[1], w[5], w[9], w[13]);
    detail::quarter_round(w[2], w[6], w[10], w[14]);
    detail::quarter_round(w[3], w[7], w[11], w[15]);
    detail::quarter_round(w[0], w[5], w[10], w[15]);
    detail::quarter_round(w[1], w[6], w[11], w[12]);
    detail::quarter_round(w[2], w[7], w[8], w[13]);
    detail::quarter_round(w[3], w[4], w[9], w[14]);
  }
  std::array<std::uint8_t, 64> out;
  for (int i = 0; i < 16; ++i) detail::store_le32(out.data() + 4 * i, w[i] + state[i]);
  return out;
}

// Incremental keystream reader plus the integer draws the ciphers need.
class ChaCha20Stream {
 public:
  ChaCha20Stream(const std::array<std::uint8_t, 32>& key,
                 const std::array<std::uint8_t, 12>& nonce)
      : key_(key), nonce_(nonce) {}

  std::uint8_t next_byte() {
    if (pos_ == 64) {
      block_ = chacha20_block(key_, nonce_, counter_++);
      pos_ = 0;
    }
    return block_[pos_++];
  }

  std::vector<std::uint8_t> next_bytes(std::size_t n) {
    std::vector<std::uint8_t> out(n);
    for (auto& b : out) b = next_byte();
    return out;
  }

  std::uint32_t next_u32() {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(next_byte()) << (8 * i);
    return v;
  }

  // Unbiased draw from [0, m) by rejection sampling on 32-bit words.
  std::uint32_t uniform(std::uint32_t m) {
    if (m == 0) throw Error(ErrorCode::empty_domain, "uniform draw from empty range");
    if (m == 1) return 0;
    const std::uint64_t span = 0x1'0000'0000ull;
    const std::uint32_t limit = static_cast<std::uint32_t>((span / m) * m - 1);
    for (;;) {
      std::uint32_t v = next_u32();
      if (v <= limit) return v % m;
    }
  }

  std::uint32_t next_bit() { return uniform(2); }

 private:
  std::array<std::uint8_t, 32> key_;
  std::array<std::uint8_t, 12> nonce_;
  std::array<std::uint8_t, 64> block_{};
  std::size_t pos_ = 64;
  std::uint32_t counter_ = 0;
};

// In-place Fisher-Yates shuffle driven by the stream: i = n-1 .. 1,
// j = uniform(i + 1), swap.
template <typename T>
void fisher_yates(std::vector<T>& items, ChaCha20Stream& stream) {
  for (std::size_t i = items.size(); i > 1;) {
    --i;
    std::uint32_t j = stream.uniform(static_cast<std::uint32_t>(i + 1));
    std::swap(items[i], items[j]);
  }
}

}  // namespace etcjpeg
