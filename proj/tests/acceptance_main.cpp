// Acceptance gate: nine end-to-end criteria, one PASS/FAIL line each.
// Exits nonzero if any criterion fails. argv[1] must be the CLI binary.

#include <sys/stat.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <numeric>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include <etcjpeg/attack.hpp>
#include <etcjpeg/jpeg_io.hpp>
#include <etcjpeg/util.hpp>

#include "support/fixtures.hpp"

using namespace etcjpeg;
using testsupport::fixture_corpus;
using testsupport::fixture_key;
using testsupport::fixture_rng;
using testsupport::synthetic_image;

namespace {

int failures = 0;

void report(int idx, const std::string& name, bool ok, const std::string& detail) {
  std::printf("[%s] criterion %d: %s%s%s\n", ok ? "PASS" : "FAIL", idx, name.c_str(),
              detail.empty() ? "" : " — ", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

template <typename Fn>
void criterion(int idx, const std::string& name, Fn&& fn) {
  try {
    const std::pair<bool, std::string> r = fn();
    report(idx, name, r.first, r.second);
  } catch (const std::exception& e) {
    report(idx, name, false, std::string("exception: ") + e.what());
  }
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof(buf), f, ap);
  va_end(ap);
  return buf;
}

int max_abs_diff(const Image& a, const Image& b) {
  if (!a.same_shape(b)) return 255;
  int worst = 0;
  for (std::size_t i = 0; i < a.samples.size(); ++i)
    worst = std::max(worst, std::abs(static_cast<int>(a.samples[i]) -
                                     static_cast<int>(b.samples[i])));
  return worst;
}

// ---- criterion 1: block-count ground truth --------------------------------

std::pair<bool, std::string> c1_block_counts() {
  const std::size_t conv = block_count(384, 512, 16, 16);
  // the packed single-channel canvas of a 384x512 color image is
  // 1152x512, tiled at 8x8
  const std::size_t gray = block_count(3 * 384, 512, 8, 8);
  return {conv == 768 && gray == 9216,
          fmt("conventional=%zu (want 768), packed=%zu (want 9216)", conv, gray)};
}

// ---- criterion 2: key-space oracle ----------------------------------------

std::pair<bool, std::string> c2_keyspace() {
  for (std::size_t n = 1; n <= 3; ++n) {
    std::uint64_t pose_total = 1, pol_total = 1, chan_total = 1;
    for (std::size_t i = 0; i < n; ++i) {
      pose_total *= 8;
      pol_total *= 2;
      chan_total *= 6;
    }
    std::vector<std::uint32_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0u);
    unsigned long long count = 0;
    do {
      for (std::uint64_t a = 0; a < pose_total; ++a)
        for (std::uint64_t b = 0; b < pol_total; ++b)
          for (std::uint64_t c = 0; c < chan_total; ++c) ++count;
    } while (std::next_permutation(perm.begin(), perm.end()));
    if (keyspace_conventional(n) != mpz_class(static_cast<unsigned long>(count)))
      return {false, fmt("enumeration mismatch at n=%zu (%llu tuples)", n, count)};
  }

  const unsigned long long direct = 6ull * 512ull * 8ull;  // 3! * 8^3 * 2^3
  if (keyspace_proposed(1) != mpz_class(static_cast<unsigned long>(direct)))
    return {false, "keyspace_proposed(1) != 24576"};

  for (std::size_t n = 1; n <= 64; ++n) {
    const KeySpaceReport r = keyspace_report(n);
    if (!(r.n_b > r.n_a))
      return {false, fmt("n_b <= n_a at n=%zu", n)};
    if (!(r.log2_n_b > r.log2_n_a))
      return {false, fmt("log2 ordering fails at n=%zu", n)};
  }
  return {true, "enumerated n<=3 exactly; proposed(1)=24576; n_b>n_a for n in [1,64]"};
}

// ---- criterion 3: cipher inverses over 200 random images ------------------

std::pair<bool, std::string> c3_cipher_inverses() {
  // exact color-conversion bound over the whole 8-bit RGB cube
  int color_bound = 0;
  for (int r = 0; r < 256; ++r) {
    Image slab(256, 256, 3);
    for (int g = 0; g < 256; ++g)
      for (int b = 0; b < 256; ++b) {
        slab.at(b, g, 0) = static_cast<std::uint8_t>(r);
        slab.at(b, g, 1) = static_cast<std::uint8_t>(g);
        slab.at(b, g, 2) = static_cast<std::uint8_t>(b);
      }
    const YcbcrPlanes p = rgb_to_ycbcr(slab);
    color_bound = std::max(color_bound, max_abs_diff(slab, ycbcr_to_rgb(p.y, p.cb, p.cr)));
  }
  if (color_bound > 3)
    return {false, fmt("color round-trip bound %d exceeds 3", color_bound)};

  auto rng = fixture_rng(900);
  int worst_gray = 0;
  for (int i = 0; i < 200; ++i) {
    const int w = 64 + static_cast<int>(rng.uniform(512 - 64 + 1));
    const int h = 64 + static_cast<int>(rng.uniform(384 - 64 + 1));
    const Image img = synthetic_image(w, h, static_cast<std::uint32_t>(1000 + i));

    const KeyFile kc = fixture_key("conventional", 16, static_cast<std::uint32_t>(i));
    const StepKeys conv_keys = derive_step_keys(kc.master, kc.nonce);
    CipherConfig conv_cfg;
    conv_cfg.scheme = "conventional";
    conv_cfg.block_w = conv_cfg.block_h = 16;
    if (!(decrypt(encrypt(img, conv_keys, conv_cfg), conv_keys, conv_cfg) == img))
      return {false, fmt("conventional round trip not byte-exact at image %d (%dx%d)", i, w, h)};

    const KeyFile kg = fixture_key("grayscale", 8, static_cast<std::uint32_t>(i));
    const StepKeys gray_keys = derive_step_keys(kg.master, kg.nonce);
    CipherConfig gray_cfg;
    gray_cfg.scheme = "grayscale";
    gray_cfg.block_w = gray_cfg.block_h = 8;
    gray_cfg.layout =
        i % 2 == 0 ? PlaneLayout::Tag::horizontal : PlaneLayout::Tag::vertical;
    const int diff =
        max_abs_diff(img, decrypt(encrypt(img, gray_keys, gray_cfg), gray_keys, gray_cfg));
    worst_gray = std::max(worst_gray, diff);
    if (diff > color_bound)
      return {false, fmt("grayscale round trip error %d exceeds bound %d at image %d", diff,
                         color_bound, i)};
  }
  return {true, fmt("200 images; conventional byte-exact; grayscale worst error %d "
                    "(color bound %d, spec allows 3)",
                    worst_gray, color_bound)};
}

// ---- criterion 4: metric oracles ------------------------------------------

// Reference scorers re-derived from the definitions, using coordinate
// arithmetic and BFS instead of the library's index arithmetic and
// union-find.
bool ref_restored(const PuzzleAssembly& a, const TransformRecord& t, std::size_t i) {
  return compose_pose(a.pose[i], t.poses[i]) == 0 && a.polarity[i] == t.polarity[i];
}

struct RefScore {
  double dc, nc, lc;
};

RefScore ref_score(const PuzzleAssembly& a, const TransformRecord& t) {
  const std::size_t cols = t.cols, rows = t.rows, n = cols * rows;
  std::size_t direct = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (a.position[i] == t.perm[i] && ref_restored(a, t, i)) ++direct;

  std::vector<std::size_t> piece_at(n);
  for (std::size_t i = 0; i < n; ++i) piece_at[a.position[i]] = i;

  auto neighbors_in_original = [&](std::size_t i, std::size_t j, bool horizontal) {
    const std::size_t ax = t.perm[i] % cols, ay = t.perm[i] / cols;
    const std::size_t bx = t.perm[j] % cols, by = t.perm[j] / cols;
    if (horizontal) return by == ay && bx == ax + 1;
    return bx == ax && by == ay + 1;
  };

  std::size_t good = 0;
  std::vector<std::vector<std::size_t>> adj(n);
  auto visit = [&](std::size_t i, std::size_t j, bool horizontal) {
    if (ref_restored(a, t, i) && ref_restored(a, t, j) &&
        neighbors_in_original(i, j, horizontal)) {
      ++good;
      adj[i].push_back(j);
      adj[j].push_back(i);
    }
  };
  for (std::size_t y = 0; y < rows; ++y)
    for (std::size_t x = 0; x < cols; ++x) {
      if (x + 1 < cols) visit(piece_at[y * cols + x], piece_at[y * cols + x + 1], true);
      if (y + 1 < rows) visit(piece_at[y * cols + x], piece_at[(y + 1) * cols + x], false);
    }

  const std::size_t b = 2 * cols * rows - cols - rows;
  std::vector<char> seen(n, 0);
  std::size_t largest = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (seen[s]) continue;
    std::size_t size = 0;
    std::queue<std::size_t> q;
    q.push(s);
    seen[s] = 1;
    while (!q.empty()) {
      const std::size_t u = q.front();
      q.pop();
      ++size;
      for (std::size_t v : adj[u])
        if (!seen[v]) {
          seen[v] = 1;
          q.push(v);
        }
    }
    largest = std::max(largest, size);
  }

  RefScore r;
  r.dc = static_cast<double>(direct) / static_cast<double>(n);
  r.nc = b == 0 ? 1.0 : static_cast<double>(good) / static_cast<double>(b);
  r.lc = static_cast<double>(largest) / static_cast<double>(n);
  return r;
}

std::pair<bool, std::string> c4_metric_oracles() {
  for (std::size_t u = 1; u <= 5; ++u)
    for (std::size_t v = 1; v <= 5; ++v) {
      const std::size_t manual = u * (v - 1) + v * (u - 1);
      if (boundary_count(u, v) != manual || boundary_count(u, v) != 2 * u * v - u - v)
        return {false, fmt("boundary count wrong at %zux%zu", u, v)};
    }

  const std::size_t grids[3][2] = {{2, 2}, {3, 2}, {2, 3}};
  unsigned long long checked = 0;
  for (const auto& g : grids) {
    const std::size_t cols = g[0], rows = g[1], n = cols * rows;
    const KeyFile kf = fixture_key("conventional", 16, static_cast<std::uint32_t>(n));
    const StepKeys keys = derive_step_keys(kf.master, kf.nonce);
    TransformRecord t;
    t.cols = cols;
    t.rows = rows;
    t.perm = gen_permutation(keys.k1, n);
    t.poses = gen_poses(keys.k2, n);
    t.polarity = gen_polarity(keys.k3, n);
    t.channel_perm.assign(n, 0);

    std::vector<std::uint32_t> placement(n);
    std::iota(placement.begin(), placement.end(), 0u);
    do {
      for (int trial = 0; trial < 3; ++trial) {
        PuzzleAssembly a;
        a.cols = cols;
        a.rows = rows;
        a.position = placement;
        a.pose.resize(n);
        a.polarity.resize(n);
        auto trial_rng =
            fixture_rng(static_cast<std::uint32_t>(checked & 0xffffffu), 40 + trial);
        for (std::size_t i = 0; i < n; ++i) {
          if (trial == 0) {
            a.pose[i] = D4Pose::from_index(t.poses[i]).inverse().index();
            a.polarity[i] = t.polarity[i];
          } else if (trial == 1) {
            a.pose[i] = 0;
            a.polarity[i] = 0;
          } else {
            a.pose[i] = static_cast<int>(trial_rng.uniform(8));
            a.polarity[i] = static_cast<int>(trial_rng.uniform(2));
          }
        }
        const AssemblyScore got = score_assembly(a, t);
        const RefScore want = ref_score(a, t);
        if (std::fabs(got.dc - want.dc) > 1e-12 || std::fabs(got.nc - want.nc) > 1e-12 ||
            std::fabs(got.lc - want.lc) > 1e-12)
          return {false, fmt("score mismatch on %zux%zu placement %llu trial %d", cols,
                             rows, checked, trial)};
        ++checked;
      }
    } while (std::next_permutation(placement.begin(), placement.end()));
  }
  return {true, fmt("all placements for n in {4,6} agree across %llu scored assemblies; "
                    "B formula exact for u,v<=5",
                    checked)};
}

// ---- criterion 5: compression property ------------------------------------

std::pair<bool, std::string> c5_compression() {
  const std::vector<Image> corpus = fixture_corpus(20, 128, 96, 100);
  const KeyFile key = fixture_key("grayscale", 8, 50);
  const std::vector<int> qfs = {75, 85, 95};

  const auto plain444 = rd_curve(corpus, RdScheme::plain_444, qfs, key);
  const auto plain420 = rd_curve(corpus, RdScheme::plain_420, qfs, key);
  const auto proposed = rd_curve(corpus, RdScheme::proposed_gray, qfs, key);

  std::string detail;
  for (std::size_t i = 0; i < qfs.size(); ++i) {
    const double delta = proposed[i].psnr_db - plain444[i].psnr_db;
    detail += fmt("qf%d: proposed-plain444=%+.2f dB; ", qfs[i], delta);
    if (std::fabs(delta) > 2.0)
      return {false, detail + fmt("|delta| exceeds 2.0 dB at qf=%d", qfs[i])};
  }
  const double margin = proposed[2].psnr_db - plain420[2].psnr_db;
  detail += fmt("qf95: proposed-plain420=%+.2f dB", margin);
  if (margin < -0.5) return {false, detail + " (below -0.5 dB)"};
  return {true, detail};
}

// ---- criterion 6: SNS emulator rule table ----------------------------------

std::pair<bool, std::string> c6_sns_rules() {
  const Image color = synthetic_image(64, 48, 200);
  const Image gray = pack_grayscale(synthetic_image(24, 32, 201),
                                    PlaneLayout::Tag::horizontal);

  auto stream = [&](Subsampling sub, int qf) {
    JpegParams p;
    p.quality = qf;
    p.subsampling = sub;
    if (sub == Subsampling::gray) p.table = TableChoice::luminance;
    return jpeg_encode(sub == Subsampling::gray ? gray : color, p);
  };

  int rows = 0;
  // every (profile, input subsampling) rule, exercised on both sides of
  // the threshold where one exists
  struct Row {
    const char* profile;
    int qfd;
    Subsampling in;
    int qfu;
    bool pass;
    Subsampling out;
  };
  const Row table[] = {
      {"twitter", 85, Subsampling::s444, 80, true, Subsampling::s444},
      {"twitter", 85, Subsampling::s444, 84, true, Subsampling::s444},
      {"twitter", 85, Subsampling::s444, 85, false, Subsampling::s420},
      {"twitter", 85, Subsampling::s444, 95, false, Subsampling::s420},
      {"twitter", 85, Subsampling::s420, 80, true, Subsampling::s420},
      {"twitter", 85, Subsampling::s420, 95, false, Subsampling::s420},
      {"twitter", 85, Subsampling::gray, 80, true, Subsampling::gray},
      {"twitter", 85, Subsampling::gray, 95, false, Subsampling::gray},
      {"facebook_hq", 85, Subsampling::s444, 60, false, Subsampling::s420},
      {"facebook_hq", 85, Subsampling::s444, 95, false, Subsampling::s420},
      {"facebook_hq", 85, Subsampling::s420, 85, false, Subsampling::s420},
      {"facebook_hq", 85, Subsampling::gray, 85, false, Subsampling::gray},
      {"facebook_hq", 71, Subsampling::s444, 90, false, Subsampling::s420},
      {"facebook_hq", 71, Subsampling::gray, 90, false, Subsampling::gray},
      {"facebook_lq", 85, Subsampling::s444, 90, false, Subsampling::s420},
      {"facebook_lq", 85, Subsampling::s420, 60, false, Subsampling::s420},
      {"facebook_lq", 85, Subsampling::gray, 90, false, Subsampling::gray},
      {"facebook_lq", 71, Subsampling::s420, 90, false, Subsampling::s420},
      {"tumblr", 85, Subsampling::s444, 95, true, Subsampling::s444},
      {"tumblr", 85, Subsampling::s420, 50, true, Subsampling::s420},
      {"tumblr", 85, Subsampling::gray, 100, true, Subsampling::gray},
      {"googleplus", 85, Subsampling::s444, 95, true, Subsampling::s444},
      {"googleplus", 85, Subsampling::s420, 85, true, Subsampling::s420},
      {"googleplus", 85, Subsampling::gray, 85, true, Subsampling::gray},
      {"flickr", 85, Subsampling::s444, 85, true, Subsampling::s444},
      {"flickr", 85, Subsampling::s420, 95, true, Subsampling::s420},
      {"flickr", 85, Subsampling::gray, 95, true, Subsampling::gray},
  };

  for (const Row& row : table) {
    const SnsProfile profile = builtin_sns_profile(row.profile, row.qfd);
    const auto uploaded = stream(row.in, row.qfu);
    const auto downloaded = sns_emulate(uploaded, profile);
    if (row.pass) {
      if (content_hash(downloaded) != content_hash(uploaded))
        return {false, fmt("%s should pass %s@qf%d untouched", row.profile,
                           subsampling_name(row.in), row.qfu)};
    } else {
      const auto [img, info] = jpeg_decode(downloaded);
      if (info.subsampling != row.out || info.qf != row.qfd || !info.qf_exact)
        return {false, fmt("%s re-encode of %s@qf%d detected as (%s, qf%d), want (%s, qf%d)",
                           row.profile, subsampling_name(row.in), row.qfu,
                           subsampling_name(info.subsampling), info.qf,
                           subsampling_name(row.out), row.qfd)};
      if (row.in == Subsampling::gray && info.channels != 1)
        return {false, fmt("%s re-encode of a grayscale stream left %d channels",
                           row.profile, info.channels)};
    }
    ++rows;
  }

  // resolution limits still enforced
  const Image wide = synthetic_image(4128, 8, 202);
  JpegParams wp;
  wp.quality = 80;
  wp.subsampling = Subsampling::s420;
  const auto wide_stream = jpeg_encode(wide, wp);
  for (const char* name : {"twitter", "facebook_hq", "facebook_lq", "tumblr"}) {
    try {
      sns_emulate(wide_stream, builtin_sns_profile(name));
      return {false, fmt("%s accepted an oversized image", name)};
    } catch (const Error& e) {
      if (std::string(e.what()).rfind("E_RESOLUTION", 0) != 0)
        return {false, fmt("%s rejected with the wrong error: %s", name, e.what())};
    }
  }

  return {true, fmt("%d rule rows verified; pass-through hash-identical; re-encodes "
                    "re-detected as declared (subsampling, qfd)",
                    rows)};
}

// ---- criterion 7: provider-distortion comparison ----------------------------

std::pair<bool, std::string> c7_facebook() {
  const std::vector<Image> corpus = fixture_corpus(10, 128, 96, 300);
  const KeyFile key = fixture_key("grayscale", 8, 51);
  const SnsProfile fb = builtin_sns_profile("facebook_hq");

  double conv_acc = 0.0, prop_acc = 0.0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto idx = static_cast<std::uint32_t>(i);
    conv_acc += psnr(corpus[i],
                     run_pipeline(corpus[i], RdScheme::conventional_420, 95, key, idx, &fb)
                         .restored);
    prop_acc += psnr(corpus[i],
                     run_pipeline(corpus[i], RdScheme::proposed_gray, 95, key, idx, &fb)
                         .restored);
  }
  const double conv = conv_acc / static_cast<double>(corpus.size());
  const double prop = prop_acc / static_cast<double>(corpus.size());
  return {prop - conv >= 2.0,
          fmt("proposed %.2f dB vs conventional-420 %.2f dB (margin %+.2f, want >= 2)",
              prop, conv, prop - conv)};
}

// ---- criterion 8: attack evaluation ----------------------------------------

std::pair<bool, std::string> c8_attack() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<Image> corpus = fixture_corpus(5, 256, 192, 400);
  SolverConfig scfg;  // MGC, full variant search, default budget

  auto campaign = [&](const char* scheme, int block) {
    AssemblyScore avg{0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      const KeyFile key = fixture_key(scheme, block, static_cast<std::uint32_t>(60 + i));
      CipherConfig cfg;
      cfg.scheme = scheme;
      cfg.block_w = cfg.block_h = block;
      const AttackOutcome out = evaluate_attack(corpus[i], key, cfg, scfg, 5);
      avg.dc += out.score.dc;
      avg.nc += out.score.nc;
      avg.lc += out.score.lc;
    }
    const double n = static_cast<double>(corpus.size());
    return AssemblyScore{avg.dc / n, avg.nc / n, avg.lc / n};
  };

  const AssemblyScore conv32 = campaign("conventional", 32);
  const AssemblyScore prop32 = campaign("grayscale", 32);
  const AssemblyScore prop16 = campaign("grayscale", 16);
  const AssemblyScore prop8 = campaign("grayscale", 8);

  const double minutes = std::chrono::duration<double>(
                             std::chrono::steady_clock::now() - t0)
                             .count() /
                         60.0;
  const std::string detail =
      fmt("conventional-32 Nc=%.3f (want >=0.3); proposed-8 Nc=%.3f Lc=%.3f "
          "(want <=0.05); proposed Lc 32->16->8: %.3f -> %.3f -> %.3f; %.1f min",
          conv32.nc, prop8.nc, prop8.lc, prop32.lc, prop16.lc, prop8.lc, minutes);

  const bool ok = conv32.nc >= 0.3 && prop8.lc <= 0.05 && prop8.nc <= 0.05 &&
                  prop32.lc > prop16.lc && prop16.lc > prop8.lc && minutes < 60.0;
  return {ok, detail};
}

// ---- criterion 9: CLI determinism ------------------------------------------

std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot read '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::pair<bool, std::string> c9_cli_determinism(const std::string& cli) {
  if (cli.empty()) return {false, "no CLI binary path given"};

  const Image fixture = synthetic_image(96, 64, 500);
  write_pnm("acc_in.ppm", fixture);

  // the SAME commands, byte for byte, run twice; outputs are hashed after
  // each pass
  const std::string dir = "acc_cli";
  ::mkdir(dir.c_str(), 0755);
  const std::string seed = "00112233445566778899aabbccddeeff";
  const std::vector<std::string> commands = {
      cli + " keygen --out " + dir + "/key_g.json --scheme grayscale --block 8"
            " --layout h --seed " + seed,
      cli + " keygen --out " + dir + "/key_c.json --scheme conventional --block 16"
            " --seed " + seed,
      cli + " encrypt --in acc_in.ppm --key " + dir + "/key_g.json --out " + dir +
          "/enc.jpg --qf 85",
      cli + " decrypt --in " + dir + "/enc.jpg --key " + dir + "/key_g.json --out " +
          dir + "/dec.ppm",
      cli + " encrypt --in acc_in.ppm --key " + dir + "/key_c.json --out " + dir +
          "/enc.ppm --truth " + dir + "/truth.json",
      cli + " roundtrip --in acc_in.ppm --key " + dir + "/key_g.json --qf 85"
            " --sns facebook_hq --out " + dir + "/rt.csv",
      cli + " keyspace --width 384 --height 512 --block 16 --out " + dir + "/ks.json",
      cli + " attack --in " + dir + "/enc.ppm --truth " + dir + "/truth.json"
            " --block 16 --seed 7 --trials 2 --out " + dir + "/attack.csv",
  };
  const char* files[] = {"key_g.json", "key_c.json", "enc.jpg",    "dec.ppm", "enc.ppm",
                         "truth.json", "rt.csv",     "attack.csv", "ks.json"};

  auto run_all = [&]() {
    std::vector<std::string> hashes;
    for (const std::string& cmd : commands) {
      const int rc = std::system((cmd + " > /dev/null").c_str());
      if (rc != 0) throw Error(ErrorCode::io, "command failed: " + cmd);
    }
    for (const char* f : files) hashes.push_back(content_hash(read_file(dir + "/" + f)));
    return hashes;
  };

  const std::vector<std::string> first = run_all();
  const std::vector<std::string> second = run_all();
  for (std::size_t i = 0; i < first.size(); ++i)
    if (first[i] != second[i])
      return {false, fmt("output '%s' differs between identical runs", files[i])};
  return {true, fmt("%zu outputs hash-identical across repeated seeded runs",
                    std::size(files))};
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";

  criterion(1, "block-count ground truth", c1_block_counts);
  criterion(2, "key-space oracle", c2_keyspace);
  criterion(3, "cipher inverses on 200 random images", c3_cipher_inverses);
  criterion(4, "reassembly metric oracles", c4_metric_oracles);
  criterion(5, "compression property at matched quality", c5_compression);
  criterion(6, "SNS recompression rule table", c6_sns_rules);
  criterion(7, "facebook-profile distortion comparison", c7_facebook);
  criterion(8, "jigsaw attack evaluation", c8_attack);
  criterion(9, "CLI determinism", [&] { return c9_cli_determinism(cli); });

  if (failures > 0) {
    std::printf("%d of 9 criteria FAILED\n", failures);
    return 1;
  }
  std::printf("all 9 criteria passed\n");
  return 0;
}
