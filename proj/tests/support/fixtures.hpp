#pragma once

// Deterministic synthetic test images. Each image is a sum of
// low-frequency cosine fields, a few soft blobs, and faint noise —
// smooth enough for boundary-compatibility metrics to work with, with
// correlated channels and mild chroma detail so chroma subsampling has
// a measurable cost.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <etcjpeg/chacha20.hpp>
#include <etcjpeg/image.hpp>
#include <etcjpeg/keyschedule.hpp>
#include <etcjpeg/util.hpp>

namespace etcjpeg::testsupport {

inline ChaCha20Stream fixture_rng(std::uint32_t index, std::uint32_t salt = 0) {
  SubKey key{};
  key[0] = static_cast<std::uint8_t>(index);
  key[1] = static_cast<std::uint8_t>(index >> 8);
  key[2] = static_cast<std::uint8_t>(index >> 16);
  key[3] = static_cast<std::uint8_t>(index >> 24);
  key[4] = static_cast<std::uint8_t>(salt);
  key[5] = static_cast<std::uint8_t>(salt >> 8);
  key[6] = 0x5a;
  return ChaCha20Stream(key, Nonce{});
}

// Uniform double in [0, 1).
inline double frand(ChaCha20Stream& rng) {
  return rng.next_u32() / 4294967296.0;
}

inline Image synthetic_image(int w, int h, std::uint32_t index) {
  ChaCha20Stream rng = fixture_rng(index);
  const double pi = 3.14159265358979323846;

  struct Wave {
    double fx, fy, phase, amp;
  };
  std::vector<Wave> luma_waves, chroma_waves;
  for (int k = 0; k < 4; ++k) {
    // Periods between roughly 0.7x and 3x of the image span.
    const double fx = (frand(rng) * 2.0 - 1.0) * 1.5 / w;
    const double fy = (frand(rng) * 2.0 - 1.0) * 1.5 / h;
    luma_waves.push_back({fx, fy, frand(rng) * 2 * pi, 30.0 + frand(rng) * 25.0});
  }
  for (int k = 0; k < 2; ++k) {
    const double fx = (frand(rng) * 2.0 - 1.0) * 1.2 / w;
    const double fy = (frand(rng) * 2.0 - 1.0) * 1.2 / h;
    chroma_waves.push_back({fx, fy, frand(rng) * 2 * pi, 18.0 + frand(rng) * 12.0});
  }

  struct Blob {
    double cx, cy, radius, amp;
  };
  std::vector<Blob> blobs;
  const int blob_count = 3 + static_cast<int>(rng.uniform(4));
  for (int k = 0; k < blob_count; ++k)
    blobs.push_back({frand(rng) * w, frand(rng) * h,
                     (0.08 + frand(rng) * 0.17) * std::min(w, h),
                     (frand(rng) < 0.5 ? -1.0 : 1.0) * (25.0 + frand(rng) * 35.0)});

  const double tint_r = frand(rng) * 0.8 - 0.4;
  const double tint_b = frand(rng) * 0.8 - 0.4;

  Image img(w, h, 3);
  ChaCha20Stream noise = fixture_rng(index, 1);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double luma = 128.0;
      for (const Wave& wv : luma_waves)
        luma += wv.amp * std::cos(2 * pi * (wv.fx * x + wv.fy * y) + wv.phase);
      for (const Blob& bl : blobs) {
        const double dx = (x - bl.cx) / bl.radius, dy = (y - bl.cy) / bl.radius;
        luma += bl.amp * std::exp(-(dx * dx + dy * dy));
      }
      double chroma = 0.0;
      for (const Wave& wv : chroma_waves)
        chroma += wv.amp * std::cos(2 * pi * (wv.fx * x + wv.fy * y) + wv.phase);
      const double n = (static_cast<double>(noise.next_byte()) - 127.5) / 64.0;
      const double r = luma + tint_r * 60.0 + chroma + n;
      const double g = luma - 0.3 * chroma + n;
      const double b = luma + tint_b * 60.0 - chroma + n;
      img.at(x, y, 0) = quantize_u8(r);
      img.at(x, y, 1) = quantize_u8(g);
      img.at(x, y, 2) = quantize_u8(b);
    }
  return img;
}

inline std::vector<Image> fixture_corpus(int count, int w, int h,
                                         std::uint32_t first_index = 0) {
  std::vector<Image> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i)
    out.push_back(synthetic_image(w, h, first_index + static_cast<std::uint32_t>(i)));
  return out;
}

// Deterministic key material for tests.
inline KeyFile fixture_key(const std::string& scheme, int block, std::uint32_t variant = 0) {
  KeyFile kf;
  kf.scheme = scheme;
  kf.block_w = kf.block_h = block;
  char seed[32];
  std::snprintf(seed, sizeof(seed), "%08x", variant);
  seed_key_material(seed, kf.master, kf.nonce);
  return kf;
}

}  // namespace etcjpeg::testsupport
