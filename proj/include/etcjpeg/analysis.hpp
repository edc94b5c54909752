#pragma once

// Key-space arithmetic (exact big integers), PSNR, and the jigsaw
// assembly metrics Dc (direct), Nc (neighbor), Lc (largest component).

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "etcjpeg/cipher.hpp"
#include "etcjpeg/d4.hpp"
#include "etcjpeg/errors.hpp"
#include "etcjpeg/image.hpp"

namespace etcjpeg {

inline std::size_t block_count(int width, int height, int block_w, int block_h) {
  if (width < 1 || height < 1 || block_w < 1 || block_h < 1)
    throw Error(ErrorCode::config, "block_count arguments must be positive");
  return static_cast<std::size_t>(width / block_w) *
         static_cast<std::size_t>(height / block_h);
}

inline double log2_mpz(const mpz_class& v) {
  if (v <= 0) throw Error(ErrorCode::config, "log2 of non-positive value");
  long exp = 0;
  double d = mpz_get_d_2exp(&exp, v.get_mpz_t());
  return std::log2(d) + static_cast<double>(exp);
}

// Exact key-space sizes for n blocks. The color scheme composes a block
// permutation (n!), per-block square symmetry (8^n), per-block
// complement bit (2^n) and per-block channel shuffle (6^n). The
// grayscale scheme works on 3n blocks but has no channel shuffle.
struct KeySpaceReport {
  std::size_t n = 0;
  mpz_class n_s, n_ri, n_n, n_c;  // factors for the color scheme
  mpz_class n_a;                  // color scheme total
  mpz_class n_b;                  // grayscale scheme total, (3n)! * 8^(3n) * 2^(3n)
  double log2_n_a = 0.0, log2_n_b = 0.0;
};

inline mpz_class keyspace_conventional(std::size_t n) {
  mpz_class total;
  mpz_fac_ui(total.get_mpz_t(), n);
  mpz_class pow;
  mpz_ui_pow_ui(pow.get_mpz_t(), 8, n);
  total *= pow;
  mpz_ui_pow_ui(pow.get_mpz_t(), 2, n);
  total *= pow;
  mpz_ui_pow_ui(pow.get_mpz_t(), 6, n);
  total *= pow;
  return total;
}

inline mpz_class keyspace_proposed(std::size_t n) {
  const std::size_t m = 3 * n;
  mpz_class total;
  mpz_fac_ui(total.get_mpz_t(), m);
  mpz_class pow;
  mpz_ui_pow_ui(pow.get_mpz_t(), 8, m);
  total *= pow;
  mpz_ui_pow_ui(pow.get_mpz_t(), 2, m);
  total *= pow;
  return total;
}

inline KeySpaceReport keyspace_report(std::size_t n) {
  KeySpaceReport r;
  r.n = n;
  mpz_fac_ui(r.n_s.get_mpz_t(), n);
  mpz_ui_pow_ui(r.n_ri.get_mpz_t(), 8, n);
  mpz_ui_pow_ui(r.n_n.get_mpz_t(), 2, n);
  mpz_ui_pow_ui(r.n_c.get_mpz_t(), 6, n);
  r.n_a = r.n_s * r.n_ri * r.n_n * r.n_c;
  r.n_b = keyspace_proposed(n);
  r.log2_n_a = log2_mpz(r.n_a);
  r.log2_n_b = log2_mpz(r.n_b);
  return r;
}

inline double mse(const Image& a, const Image& b) {
  if (!a.same_shape(b))
    throw Error(ErrorCode::dimension, "images to compare must share shape");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    const double d = static_cast<double>(a.samples[i]) - static_cast<double>(b.samples[i]);
    acc += d * d;
  }
  return acc / static_cast<double>(a.samples.size());
}

// Peak signal-to-noise ratio in dB over all samples of all channels;
// identical images give +infinity.
inline double psnr(const Image& a, const Image& b) {
  const double m = mse(a, b);
  if (m == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(255.0 * 255.0 / m);
}

inline std::string psnr_to_string(double db) {
  if (std::isinf(db)) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", db);
  return buf;
}

// An attacker's proposed reconstruction of a scrambled grid: piece i
// (the block at scrambled position i) is placed at grid slot
// position[i] after applying correction pose[i] and complement bit
// polarity[i]. The perfect answer places piece i at truth.perm[i] with
// the inverse of the truth pose and the truth polarity bit.
struct PuzzleAssembly {
  std::size_t cols = 0, rows = 0;
  std::vector<std::uint32_t> position;
  std::vector<int> pose;
  std::vector<int> polarity;
};

inline PuzzleAssembly identity_assembly(const TransformRecord& truth) {
  PuzzleAssembly a;
  a.cols = truth.cols;
  a.rows = truth.rows;
  a.position = truth.perm;
  a.pose.resize(truth.poses.size());
  a.polarity = truth.polarity;
  for (std::size_t i = 0; i < truth.poses.size(); ++i)
    a.pose[i] = D4Pose::from_index(truth.poses[i]).inverse().index();
  return a;
}

namespace detail {

inline void check_assembly(const PuzzleAssembly& a, const TransformRecord& t) {
  const std::size_t n = t.cols * t.rows;
  if (a.cols != t.cols || a.rows != t.rows || a.position.size() != n ||
      a.pose.size() != n || a.polarity.size() != n)
    throw Error(ErrorCode::dimension, "assembly does not match the truth grid");
  std::vector<char> seen(n, 0);
  for (auto p : a.position) {
    if (p >= n || seen[p])
      throw Error(ErrorCode::dimension, "assembly positions must be a permutation");
    seen[p] = 1;
  }
}

// Piece i restored to its true orientation and polarity?
inline bool piece_pose_correct(const PuzzleAssembly& a, const TransformRecord& t,
                               std::size_t i) {
  return a.pose[i] == D4Pose::from_index(t.poses[i]).inverse().index() &&
         a.polarity[i] == t.polarity[i];
}

}  // namespace detail

// Fraction of pieces at the correct position with the correct
// orientation and polarity.
inline double direct_comparison(const PuzzleAssembly& a, const TransformRecord& t) {
  detail::check_assembly(a, t);
  const std::size_t n = t.cols * t.rows;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (a.position[i] == t.perm[i] && detail::piece_pose_correct(a, t, i)) ++correct;
  return static_cast<double>(correct) / static_cast<double>(n);
}

// Number of internal boundaries of a u x v grid.
inline std::size_t boundary_count(std::size_t u, std::size_t v) {
  return 2 * u * v - u - v;
}

namespace detail {

// An adjacency in the reconstruction is correct when the two pieces'
// original blocks were neighbors in the same direction and both pieces
// are restored to true orientation/polarity. The test is deliberately
// translation-invariant: a globally shifted but locally perfect
// reconstruction still scores on Nc and Lc.
inline bool adjacency_correct(const PuzzleAssembly& a, const TransformRecord& t,
                              std::size_t piece_left, std::size_t piece_right,
                              bool horizontal) {
  if (!piece_pose_correct(a, t, piece_left) || !piece_pose_correct(a, t, piece_right))
    return false;
  const std::size_t cols = t.cols;
  const std::uint32_t pa = t.perm[piece_left];
  const std::uint32_t pb = t.perm[piece_right];
  if (horizontal)
    return pa / cols == pb / cols && pb == pa + 1;
  return pb == pa + cols;
}

template <typename Fn>
void for_each_adjacency(const PuzzleAssembly& a, const TransformRecord& t, Fn&& fn) {
  const std::size_t n = t.cols * t.rows;
  std::vector<std::uint32_t> piece_at(n);
  for (std::size_t i = 0; i < n; ++i) piece_at[a.position[i]] = static_cast<std::uint32_t>(i);
  for (std::size_t y = 0; y < t.rows; ++y)
    for (std::size_t x = 0; x < t.cols; ++x) {
      const std::size_t slot = y * t.cols + x;
      if (x + 1 < t.cols)
        fn(piece_at[slot], piece_at[slot + 1], /*horizontal=*/true);
      if (y + 1 < t.rows)
        fn(piece_at[slot], piece_at[slot + t.cols], /*horizontal=*/false);
    }
}

}  // namespace detail

// Fraction of the B = 2uv - u - v internal boundaries joining two pieces
// that were true neighbors, in the true relative direction, both restored
// to true orientation/polarity.
inline double neighbor_comparison(const PuzzleAssembly& a, const TransformRecord& t) {
  detail::check_assembly(a, t);
  const std::size_t b = boundary_count(t.cols, t.rows);
  if (b == 0) return 1.0;  // a 1x1 grid has no boundaries to get wrong
  std::size_t correct = 0;
  detail::for_each_adjacency(a, t, [&](std::uint32_t lo, std::uint32_t hi, bool horiz) {
    if (detail::adjacency_correct(a, t, lo, hi, horiz)) ++correct;
  });
  return static_cast<double>(correct) / static_cast<double>(b);
}

// Size of the largest set of pieces mutually connected through correct
// adjacencies, as a fraction of n. Never below 1/n.
inline double largest_component(const PuzzleAssembly& a, const TransformRecord& t) {
  detail::check_assembly(a, t);
  const std::size_t n = t.cols * t.rows;
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  detail::for_each_adjacency(a, t, [&](std::uint32_t lo, std::uint32_t hi, bool horiz) {
    if (detail::adjacency_correct(a, t, lo, hi, horiz)) parent[find(lo)] = find(hi);
  });
  std::vector<std::size_t> size(n, 0);
  std::size_t best = 0;
  for (std::size_t i = 0; i < n; ++i) best = std::max(best, ++size[find(i)]);
  return static_cast<double>(best) / static_cast<double>(n);
}

struct AssemblyScore {
  double dc = 0.0, nc = 0.0, lc = 0.0;
};

inline AssemblyScore score_assembly(const PuzzleAssembly& a, const TransformRecord& t) {
  return {direct_comparison(a, t), neighbor_comparison(a, t), largest_component(a, t)};
}

}  // namespace etcjpeg
