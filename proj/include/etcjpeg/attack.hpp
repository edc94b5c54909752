#pragma once

// Jigsaw-puzzle-solver attack on block-scrambled images: per-piece pose
// and polarity hypotheses, boundary compatibility (MGC or SSD), greedy
// best-first kernel growth, and the evaluation harness that attacks
// several independently keyed encryptions and keeps the best result.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "etcjpeg/analysis.hpp"
#include "etcjpeg/blocks.hpp"
#include "etcjpeg/cipher.hpp"
#include "etcjpeg/d4.hpp"
#include "etcjpeg/errors.hpp"
#include "etcjpeg/keyschedule.hpp"
#include "etcjpeg/util.hpp"

namespace etcjpeg {

enum class Compatibility { mgc, ssd };

inline const char* compatibility_name(Compatibility c) {
  return c == Compatibility::mgc ? "mgc" : "ssd";
}

inline Compatibility compatibility_from_name(const std::string& s) {
  if (s == "mgc") return Compatibility::mgc;
  if (s == "ssd") return Compatibility::ssd;
  throw Error(ErrorCode::config, "unknown compatibility metric '" + s + "'");
}

struct SolverConfig {
  Compatibility metric = Compatibility::mgc;
  // On: 16 hypotheses per piece (8 poses x 2 polarities) plus, for
  // 3-channel pieces, a relative channel-assignment search per boundary.
  // Off: identity hypothesis only (a classic position-only solver).
  bool variant_search = true;
  std::uint64_t seed = 0;
  double time_budget_seconds = 1800.0;
};

struct PieceVariant {
  int piece = 0;
  D4Pose pose;
  int polarity = 0;
  Tile pixels;
};

// All 16 pose x polarity images of a tile, pose-major:
// index = pose*2 + polarity.
inline std::vector<PieceVariant> expand_variants(const Tile& t, int piece_id = 0) {
  if (t.w != t.h) throw Error(ErrorCode::shape, "variants require a square tile");
  std::vector<PieceVariant> out;
  out.reserve(16);
  for (int p = 0; p < 8; ++p) {
    Tile posed = apply_pose(t, D4Pose::from_index(p));
    for (int r = 0; r < 2; ++r) {
      PieceVariant v{piece_id, D4Pose::from_index(p), r, posed};
      apply_negpos(v.pixels, r);
      out.push_back(std::move(v));
    }
  }
  return out;
}

namespace detail {

// Edge strips and gradient statistics for every (piece, pose, side),
// precomputed once so boundary costs are tight loops over floats.
// side 0 = right edge (outermost column), side 1 = left edge.
class EdgeSet {
 public:
  EdgeSet(const std::vector<Tile>& pieces, int poses) {
    n_ = static_cast<int>(pieces.size());
    poses_ = poses;
    span_ = pieces.empty() ? 0 : pieces[0].h;
    channels_ = pieces.empty() ? 1 : pieces[0].channels;
    edge_.assign(static_cast<std::size_t>(n_) * poses_ * 2 * channels_ * span_, 0.0f);
    mu_.assign(static_cast<std::size_t>(n_) * poses_ * 2 * channels_, 0.0f);
    var_.assign(mu_.size(), 1.0f);
    for (int i = 0; i < n_; ++i)
      for (int p = 0; p < poses_; ++p) {
        const Tile posed = apply_pose(pieces[i], D4Pose::from_index(p));
        fill_side(posed, i, p, /*side=*/0);
        fill_side(posed, i, p, /*side=*/1);
      }
  }

  int pieces() const { return n_; }
  int span() const { return span_; }
  int channels() const { return channels_; }

  const float* edge(int piece, int pose, int side, int channel) const {
    return edge_.data() + (((static_cast<std::size_t>(piece) * poses_ + pose) * 2 + side) *
                               channels_ +
                           channel) *
                              span_;
  }
  float mu(int piece, int pose, int side, int channel) const {
    return mu_[((static_cast<std::size_t>(piece) * poses_ + pose) * 2 + side) * channels_ +
               channel];
  }
  float var(int piece, int pose, int side, int channel) const {
    return var_[((static_cast<std::size_t>(piece) * poses_ + pose) * 2 + side) * channels_ +
                channel];
  }

 private:
  void fill_side(const Tile& t, int piece, int pose, int side) {
    const int x0 = side == 0 ? t.w - 1 : 0;          // outermost column
    const int x1 = side == 0 ? t.w - 2 : 1;          // next column inward
    const bool has_inner = t.w >= 2;
    for (int c = 0; c < channels_; ++c) {
      float* e = const_cast<float*>(edge(piece, pose, side, c));
      double sum = 0.0, sum2 = 0.0;
      for (int y = 0; y < span_; ++y) {
        const float outer = t.at(x0, y, c);
        e[y] = outer;
        const float grad = has_inner ? outer - t.at(x1, y, c) : 0.0f;
        sum += grad;
        sum2 += static_cast<double>(grad) * grad;
      }
      const double mean = sum / span_;
      const double variance = std::max(sum2 / span_ - mean * mean, 0.0);
      const std::size_t idx =
          ((static_cast<std::size_t>(piece) * poses_ + pose) * 2 + side) * channels_ + c;
      mu_[idx] = static_cast<float>(mean);
      // Floor keeps flat edges from dominating every ranking.
      var_[idx] = static_cast<float>(variance + 0.01);
    }
  }

  int n_ = 0, poses_ = 1, span_ = 0, channels_ = 1;
  std::vector<float> edge_;
  std::vector<float> mu_, var_;
};

// Cost of joining channel ca of piece a (pose pa, right edge) to channel
// cb of piece b (pose pb, left edge), with b complemented when rel_pol=1.
inline double channel_pair_cost(const EdgeSet& es, int a, int pa, int b, int pb,
                                int rel_pol, int ca, int cb, Compatibility metric) {
  const float* ea = es.edge(a, pa, 0, ca);
  const float* eb = es.edge(b, pb, 1, cb);
  const int span = es.span();
  if (metric == Compatibility::ssd) {
    double acc = 0.0;
    for (int y = 0; y < span; ++y) {
      const double bv = rel_pol ? 255.0 - eb[y] : eb[y];
      const double d = bv - ea[y];
      acc += d * d;
    }
    return acc;
  }
  // MGC, per-channel: penalize the seam gradient's deviation from each
  // side's own edge-gradient statistics, in both directions.
  const double mu_a = es.mu(a, pa, 0, ca);
  const double var_a = es.var(a, pa, 0, ca);
  const double mu_b = (rel_pol ? -1.0 : 1.0) * es.mu(b, pb, 1, cb);
  const double var_b = es.var(b, pb, 1, cb);
  double acc_ab = 0.0, acc_ba = 0.0;
  for (int y = 0; y < span; ++y) {
    const double bv = rel_pol ? 255.0 - eb[y] : eb[y];
    const double g = bv - ea[y];          // gradient crossing from a into b
    const double d1 = g - mu_a;
    const double d2 = -g - mu_b;          // gradient crossing from b into a
    acc_ab += d1 * d1;
    acc_ba += d2 * d2;
  }
  return acc_ab / var_a + acc_ba / var_b;
}

// Full boundary cost a(right edge) against b(left edge). For 3-channel
// pieces under variant search the relative channel assignment is part of
// the hypothesis space, so the cost takes the best of the 6 assignments.
inline double seam_cost_right(const EdgeSet& es, int a, int pa, int b, int pb, int rel_pol,
                              Compatibility metric, bool channel_perm_search) {
  const int ch = es.channels();
  if (ch == 1 || !channel_perm_search) {
    double acc = 0.0;
    for (int c = 0; c < ch; ++c)
      acc += channel_pair_cost(es, a, pa, b, pb, rel_pol, c, c, metric);
    return acc;
  }
  double m[3][3];
  for (int ca = 0; ca < 3; ++ca)
    for (int cb = 0; cb < 3; ++cb)
      m[ca][cb] = channel_pair_cost(es, a, pa, b, pb, rel_pol, ca, cb, metric);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& sigma : kChannelPerms)
    best = std::min(best, m[0][sigma[0]] + m[1][sigma[1]] + m[2][sigma[2]]);
  return best;
}

// Vertical adjacency reduces to horizontal adjacency on the quarter-turned
// canvas: with a above b, rotating everything clockwise puts b to a's left.
inline double seam_cost_down(const EdgeSet& es, int a, int pa, int b, int pb, int rel_pol,
                             Compatibility metric, bool channel_perm_search) {
  constexpr int kCw = 1;  // one clockwise quarter turn
  return seam_cost_right(es, b, compose_pose(kCw, pb), a, compose_pose(kCw, pa), rel_pol,
                         metric, channel_perm_search);
}

}  // namespace detail

// Greedy best-first assembly of n = cols x rows square pieces. Returns a
// complete assembly; pieces the search could not judge before the time
// budget expires are filled in deterministically.
inline PuzzleAssembly solve(const std::vector<Tile>& pieces, std::size_t cols,
                            std::size_t rows, const SolverConfig& cfg) {
  const std::size_t n = pieces.size();
  if (n == 0 || cols * rows != n)
    throw Error(ErrorCode::grid, "piece count does not match the declared grid");
  for (const Tile& t : pieces)
    if (t.w != t.h || t.w != pieces[0].w || t.channels != pieces[0].channels)
      throw Error(ErrorCode::shape, "pieces must be identical square tiles");

  PuzzleAssembly out;
  out.cols = cols;
  out.rows = rows;
  out.position.assign(n, 0);
  out.pose.assign(n, 0);
  out.polarity.assign(n, 0);
  if (n == 1) return out;

  const auto deadline = std::chrono::steady_clock::now() +
                        std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                            std::chrono::duration<double>(cfg.time_budget_seconds));
  const int pose_count = cfg.variant_search ? 8 : 1;
  const int pol_count = cfg.variant_search ? 2 : 1;
  const bool perm_search = cfg.variant_search && pieces[0].channels == 3;
  // All 8 poses are always precomputed: even a position-only search reads
  // quarter-turned strips when vertical costs reduce to horizontal ones.
  const detail::EdgeSet es(pieces, 8);

  // Board with the anchor at the center; legal growth keeps the bounding
  // box within cols x rows, so coordinates span at most 2*cols-1 wide.
  const int bw = 2 * static_cast<int>(cols) - 1;
  const int bh = 2 * static_cast<int>(rows) - 1;
  const int ax = static_cast<int>(cols) - 1, ay = static_cast<int>(rows) - 1;
  std::vector<int> board(static_cast<std::size_t>(bw) * bh, -1);
  std::vector<char> placed(n, 0);
  std::vector<int> piece_x(n, 0), piece_y(n, 0);
  int minx = ax, maxx = ax, miny = ay, maxy = ay;
  std::size_t placed_count = 0;

  auto slot_of = [bw](int x, int y) { return y * bw + x; };
  auto legal = [&](int x, int y) {
    if (x < 0 || y < 0 || x >= bw || y >= bh) return false;
    const int nminx = std::min(minx, x), nmaxx = std::max(maxx, x);
    const int nminy = std::min(miny, y), nmaxy = std::max(maxy, y);
    return nmaxx - nminx + 1 <= static_cast<int>(cols) &&
           nmaxy - nminy + 1 <= static_cast<int>(rows);
  };

  // Boundary cost between the already-placed piece `q` and the candidate
  // (piece, pose, pol) sitting at (x, y); dir encodes where q sits
  // relative to the candidate.
  auto neighbor_cost = [&](int q, int cand, int cand_pose, int cand_pol, int dx,
                           int dy) -> double {
    const int rel = (out.polarity[q] ^ cand_pol) & 1;
    if (dx == -1)  // q to the left of candidate
      return detail::seam_cost_right(es, q, out.pose[q], cand, cand_pose, rel, cfg.metric,
                                     perm_search);
    if (dx == 1)
      return detail::seam_cost_right(es, cand, cand_pose, q, out.pose[q], rel, cfg.metric,
                                     perm_search);
    if (dy == -1)  // q above candidate
      return detail::seam_cost_down(es, q, out.pose[q], cand, cand_pose, rel, cfg.metric,
                                    perm_search);
    return detail::seam_cost_down(es, cand, cand_pose, q, out.pose[q], rel, cfg.metric,
                                  perm_search);
  };

  struct Candidate {
    double avg_cost = 0.0;
    int x = 0, y = 0;
    int piece = -1, pose = 0, pol = 0;
    int neighbors = 0;
    std::uint64_t tiebreak = 0;
    bool operator>(const Candidate& o) const {
      if (avg_cost != o.avg_cost) return avg_cost > o.avg_cost;
      return tiebreak > o.tiebreak;
    }
  };
  std::priority_queue<Candidate, std::vector<Candidate>, std::greater<>> queue;

  auto tiebreak_of = [&](int x, int y, int piece, int pose, int pol) {
    std::uint64_t h = fnv1a64_begin();
    for (std::uint64_t v : {cfg.seed, static_cast<std::uint64_t>(x),
                            static_cast<std::uint64_t>(y), static_cast<std::uint64_t>(piece),
                            static_cast<std::uint64_t>(pose), static_cast<std::uint64_t>(pol)})
      h = fnv1a64_step(h, v);
    return h;
  };

  static constexpr int kDx[4] = {-1, 1, 0, 0};
  static constexpr int kDy[4] = {0, 0, -1, 1};

  // Exhaustive best candidate for one empty slot against all its placed
  // neighbors; returns false when the slot has no placed neighbor.
  auto best_for_slot = [&](int x, int y, Candidate& best) -> bool {
    int nbr_piece[4], nbr_dx[4], nbr_dy[4], nbr_count = 0;
    for (int d = 0; d < 4; ++d) {
      const int qx = x + kDx[d], qy = y + kDy[d];
      if (qx < 0 || qy < 0 || qx >= bw || qy >= bh) continue;
      const int q = board[slot_of(qx, qy)];
      if (q >= 0) {
        nbr_piece[nbr_count] = q;
        nbr_dx[nbr_count] = kDx[d];
        nbr_dy[nbr_count] = kDy[d];
        ++nbr_count;
      }
    }
    if (nbr_count == 0) return false;
    best = Candidate{};
    best.avg_cost = std::numeric_limits<double>::infinity();
    for (std::size_t cand = 0; cand < n; ++cand) {
      if (placed[cand]) continue;
      for (int p = 0; p < pose_count; ++p)
        for (int r = 0; r < pol_count; ++r) {
          double total = 0.0;
          for (int k = 0; k < nbr_count; ++k)
            total += neighbor_cost(nbr_piece[k], static_cast<int>(cand), p, r, nbr_dx[k],
                                   nbr_dy[k]);
          const double avg = total / nbr_count;
          const std::uint64_t tb = tiebreak_of(x, y, static_cast<int>(cand), p, r);
          if (avg < best.avg_cost ||
              (avg == best.avg_cost && tb < best.tiebreak)) {
            best = Candidate{avg, x, y, static_cast<int>(cand), p, r, nbr_count, tb};
          }
        }
    }
    return best.piece >= 0;
  };

  auto place = [&](int piece, int x, int y, int pose, int pol) {
    board[slot_of(x, y)] = piece;
    placed[piece] = 1;
    piece_x[piece] = x;
    piece_y[piece] = y;
    out.pose[piece] = pose;
    out.polarity[piece] = pol;
    minx = std::min(minx, x);
    maxx = std::max(maxx, x);
    miny = std::min(miny, y);
    maxy = std::max(maxy, y);
    ++placed_count;
    for (int d = 0; d < 4; ++d) {
      const int sx = x + kDx[d], sy = y + kDy[d];
      if (!legal(sx, sy) || board[slot_of(sx, sy)] >= 0) continue;
      Candidate c;
      if (best_for_slot(sx, sy, c)) queue.push(c);
    }
  };

  // Anchor: the most textured piece (highest sample variance) gives the
  // search a distinctive starting point. Its pose/polarity frame is
  // arbitrary; scoring handles global frames separately.
  std::size_t anchor = 0;
  double best_energy = -1.0;
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0, sum2 = 0.0;
    for (std::uint8_t v : pieces[i].px) {
      sum += v;
      sum2 += static_cast<double>(v) * v;
    }
    const double m = sum / pieces[i].px.size();
    const double energy = sum2 / pieces[i].px.size() - m * m;
    if (energy > best_energy) {
      best_energy = energy;
      anchor = i;
    }
  }
  place(static_cast<int>(anchor), ax, ay, 0, 0);

  while (placed_count < n && !queue.empty()) {
    if (std::chrono::steady_clock::now() > deadline) break;
    Candidate c = queue.top();
    queue.pop();
    if (!legal(c.x, c.y)) continue;
    const int slot = slot_of(c.x, c.y);
    if (board[slot] >= 0) continue;
    int nbr_count = 0;
    for (int d = 0; d < 4; ++d) {
      const int qx = c.x + kDx[d], qy = c.y + kDy[d];
      if (qx >= 0 && qy >= 0 && qx < bw && qy < bh && board[slot_of(qx, qy)] >= 0)
        ++nbr_count;
    }
    if (placed[c.piece] || nbr_count != c.neighbors) {
      Candidate fresh;
      if (best_for_slot(c.x, c.y, fresh)) queue.push(fresh);
      continue;
    }
    place(c.piece, c.x, c.y, c.pose, c.pol);
  }

  // Deterministic completion for anything the search left unplaced.
  if (placed_count < n) {
    const int x0 = minx, y0 = miny;
    std::size_t next = 0;
    for (int y = y0; y < y0 + static_cast<int>(rows) && placed_count < n; ++y)
      for (int x = x0; x < x0 + static_cast<int>(cols) && placed_count < n; ++x) {
        if (board[slot_of(x, y)] >= 0) continue;
        while (next < n && placed[next]) ++next;
        board[slot_of(x, y)] = static_cast<int>(next);
        placed[next] = 1;
        piece_x[next] = x;
        piece_y[next] = y;
        out.pose[next] = 0;
        out.polarity[next] = 0;
        minx = std::min(minx, x);
        maxx = std::max(maxx, x);
        miny = std::min(miny, y);
        maxy = std::max(maxy, y);
        ++placed_count;
      }
  }

  for (std::size_t i = 0; i < n; ++i)
    out.position[i] = static_cast<std::uint32_t>((piece_y[i] - miny) * static_cast<int>(cols) +
                                                 (piece_x[i] - minx));
  return out;
}

// The global frame of a reconstruction is unknowable to the attacker: a
// consistently rotated/flipped board (and a global polarity flip) is
// pairwise indistinguishable. Scoring therefore takes the best over all
// shape-preserving global transforms, the standard convention for
// unknown-orientation puzzles.
inline std::vector<PuzzleAssembly> frame_variants(const PuzzleAssembly& a) {
  std::vector<PuzzleAssembly> frames;
  for (int g = 0; g < 8; ++g) {
    const D4Pose gp = D4Pose::from_index(g);
    if (gp.rot % 2 == 1 && a.cols != a.rows) continue;  // quarter turns need a square grid
    PuzzleAssembly f = a;
    for (std::size_t i = 0; i < a.position.size(); ++i) {
      const int x = static_cast<int>(a.position[i] % a.cols);
      const int y = static_cast<int>(a.position[i] / a.cols);
      const auto [nx, ny] =
          pose_coord(x, y, static_cast<int>(a.cols), static_cast<int>(a.rows), gp);
      f.position[i] = static_cast<std::uint32_t>(ny * static_cast<int>(a.cols) + nx);
      f.pose[i] = compose_pose(g, a.pose[i]);
    }
    frames.push_back(f);
    PuzzleAssembly flipped = f;
    for (auto& r : flipped.polarity) r ^= 1;
    frames.push_back(std::move(flipped));
  }
  return frames;
}

inline AssemblyScore best_frame_score(const PuzzleAssembly& a, const TransformRecord& truth) {
  AssemblyScore best{-1.0, 0.0, 0.0};
  double best_sum = -1.0;
  for (const PuzzleAssembly& f : frame_variants(a)) {
    const AssemblyScore s = score_assembly(f, truth);
    const double sum = s.dc + s.nc + s.lc;
    if (sum > best_sum) {
      best_sum = sum;
      best = s;
    }
  }
  return best;
}

// Reassemble the attacker's answer into pixels (one tile per grid slot,
// each transformed by its chosen hypothesis).
inline Image render_assembly(const std::vector<Tile>& pieces, const PuzzleAssembly& a) {
  if (pieces.empty()) throw Error(ErrorCode::grid, "no pieces to render");
  const int bw = pieces[0].w, bh = pieces[0].h, ch = pieces[0].channels;
  Image img(static_cast<int>(a.cols) * bw, static_cast<int>(a.rows) * bh, ch);
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    Tile t = apply_pose(pieces[i], D4Pose::from_index(a.pose[i]));
    apply_negpos(t, a.polarity[i]);
    const int sx = static_cast<int>(a.position[i] % a.cols) * bw;
    const int sy = static_cast<int>(a.position[i] / a.cols) * bh;
    for (int c = 0; c < ch; ++c)
      for (int y = 0; y < bh; ++y)
        for (int x = 0; x < bw; ++x) img.at(sx + x, sy + y, c) = t.at(x, y, c);
  }
  return img;
}

struct AttackOutcome {
  AssemblyScore score;
  PuzzleAssembly assembly;
  std::uint32_t trial = 0;
};

// Attack `trials` independently keyed encryptions of one image and keep
// the reconstruction with the highest Dc+Nc+Lc sum.
inline AttackOutcome evaluate_attack(const Image& original, const KeyFile& key,
                                     const CipherConfig& cipher_cfg,
                                     const SolverConfig& solver_cfg, std::uint32_t trials) {
  if (trials < 1) throw Error(ErrorCode::config, "trials must be at least 1");
  AttackOutcome best;
  double best_sum = -1.0;
  for (std::uint32_t t = 0; t < trials; ++t) {
    const StepKeys keys = derive_step_keys(key.master, nonce_for_trial(key.nonce, t));
    const CipherResult enc = encrypt_with_record(original, keys, cipher_cfg);
    BlockGrid grid = split_blocks(enc.image, cipher_cfg.block_w, cipher_cfg.block_h);
    PuzzleAssembly assembly = solve(grid.tiles, static_cast<std::size_t>(grid.cols),
                                    static_cast<std::size_t>(grid.rows), solver_cfg);
    const AssemblyScore score = best_frame_score(assembly, enc.record);
    const double sum = score.dc + score.nc + score.lc;
    if (sum > best_sum) {
      best_sum = sum;
      best = AttackOutcome{score, std::move(assembly), t};
    }
  }
  return best;
}

}  // namespace etcjpeg
