#pragma once

// Baseline JFIF encode/decode with explicit subsampling and
// quantization-table control, quality-factor estimation by table
// back-matching, an SNS recompression emulator, and RD-curve generation.

#include <array>
#include <csetjmp>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <jpeglib.h>

#include <json.hpp>

#include "etcjpeg/analysis.hpp"
#include "etcjpeg/cipher.hpp"
#include "etcjpeg/errors.hpp"
#include "etcjpeg/image.hpp"

namespace etcjpeg {

enum class Subsampling { s444, s420, gray };

inline const char* subsampling_name(Subsampling s) {
  switch (s) {
    case Subsampling::s444: return "444";
    case Subsampling::s420: return "420";
    default: return "gray";
  }
}

inline Subsampling subsampling_from_name(const std::string& s) {
  if (s == "444" || s == "4:4:4") return Subsampling::s444;
  if (s == "420" || s == "4:2:0") return Subsampling::s420;
  if (s == "gray" || s == "grayscale") return Subsampling::gray;
  throw Error(ErrorCode::config, "unknown subsampling '" + s + "'");
}

enum class TableChoice { automatic, luminance, chrominance };

inline const char* table_choice_name(TableChoice t) {
  switch (t) {
    case TableChoice::luminance: return "lum";
    case TableChoice::chrominance: return "chrom";
    default: return "auto";
  }
}

inline TableChoice table_choice_from_name(const std::string& s) {
  if (s == "lum" || s == "luminance") return TableChoice::luminance;
  if (s == "chrom" || s == "chrominance") return TableChoice::chrominance;
  if (s == "auto") return TableChoice::automatic;
  throw Error(ErrorCode::config, "unknown table choice '" + s + "'");
}

struct JpegParams {
  int quality = 85;  // 1..100
  Subsampling subsampling = Subsampling::s444;
  // Which base quantization table a grayscale stream carries. Only
  // meaningful for single-channel input; `automatic` means luminance.
  TableChoice table = TableChoice::automatic;
};

// ITU-T T.81 Annex K reference quantization tables, natural (row-major) order.
inline constexpr unsigned int kLuminanceTable[64] = {
    16, 11, 10, 16, 24,  40,  51,  61,   //
    12, 12, 14, 19, 26,  58,  60,  55,   //
    14, 13, 16, 24, 40,  57,  69,  56,   //
    14, 17, 22, 29, 51,  87,  80,  62,   //
    18, 22, 37, 56, 68,  109, 103, 77,   //
    24, 35, 55, 64, 81,  104, 113, 92,   //
    49, 64, 78, 87, 103, 121, 120, 101,  //
    72, 92, 95, 98, 112, 100, 103, 99,
};

inline constexpr unsigned int kChrominanceTable[64] = {
    17, 18, 24, 47, 99, 99, 99, 99,  //
    18, 21, 26, 66, 99, 99, 99, 99,  //
    24, 26, 56, 99, 99, 99, 99, 99,  //
    47, 66, 99, 99, 99, 99, 99, 99,  //
    99, 99, 99, 99, 99, 99, 99, 99,  //
    99, 99, 99, 99, 99, 99, 99, 99,  //
    99, 99, 99, 99, 99, 99, 99, 99,  //
    99, 99, 99, 99, 99, 99, 99, 99,
};

// Standard quality-to-percent mapping used when scaling the reference tables.
inline int quality_scale_percent(int quality) {
  if (quality < 1 || quality > 100)
    throw Error(ErrorCode::config, "quality must be in [1,100]");
  return quality < 50 ? 5000 / quality : 200 - 2 * quality;
}

inline std::array<std::uint16_t, 64> scaled_table(const unsigned int (&base)[64],
                                                  int quality) {
  const long percent = quality_scale_percent(quality);
  std::array<std::uint16_t, 64> out{};
  for (int i = 0; i < 64; ++i) {
    long v = (static_cast<long>(base[i]) * percent + 50) / 100;
    if (v < 1) v = 1;
    if (v > 255) v = 255;  // baseline streams carry 8-bit table entries
    out[i] = static_cast<std::uint16_t>(v);
  }
  return out;
}

namespace detail {

struct JpegErrorTrap {
  jpeg_error_mgr mgr;
  std::jmp_buf env;
  char message[JMSG_LENGTH_MAX];
};

inline void jpeg_trap_error_exit(j_common_ptr cinfo) {
  auto* trap = reinterpret_cast<JpegErrorTrap*>(cinfo->err);
  (*cinfo->err->format_message)(cinfo, trap->message);
  std::longjmp(trap->env, 1);
}

inline void jpeg_trap_output_message(j_common_ptr) {}

inline void init_trap(JpegErrorTrap& trap) {
  jpeg_std_error(&trap.mgr);
  trap.mgr.error_exit = jpeg_trap_error_exit;
  trap.mgr.output_message = jpeg_trap_output_message;
  trap.message[0] = '\0';
}

}  // namespace detail

inline void validate_encode_params(const Image& img, const JpegParams& params) {
  quality_scale_percent(params.quality);  // range check
  if (img.channels == 3) {
    if (params.subsampling == Subsampling::gray)
      throw Error(ErrorCode::config, "3-channel input cannot use grayscale subsampling");
    if (params.table != TableChoice::automatic)
      throw Error(ErrorCode::config, "table choice applies only to grayscale input");
  } else {
    if (params.subsampling != Subsampling::gray)
      throw Error(ErrorCode::config, "single-channel input requires grayscale subsampling");
  }
}

inline std::vector<std::uint8_t> jpeg_encode(const Image& img, const JpegParams& params) {
  validate_encode_params(img, params);

  jpeg_compress_struct cinfo;
  detail::JpegErrorTrap trap;
  detail::init_trap(trap);
  cinfo.err = &trap.mgr;

  unsigned char* buffer = nullptr;
  unsigned long buffer_size = 0;
  std::vector<JSAMPLE> row(static_cast<std::size_t>(img.width) * img.channels);

  if (setjmp(trap.env)) {
    jpeg_destroy_compress(&cinfo);
    std::free(buffer);
    throw Error(ErrorCode::config, std::string("jpeg encode failed: ") + trap.message);
  }

  jpeg_create_compress(&cinfo);
  jpeg_mem_dest(&cinfo, &buffer, &buffer_size);

  cinfo.image_width = static_cast<JDIMENSION>(img.width);
  cinfo.image_height = static_cast<JDIMENSION>(img.height);
  cinfo.input_components = img.channels;
  cinfo.in_color_space = img.channels == 3 ? JCS_RGB : JCS_GRAYSCALE;
  jpeg_set_defaults(&cinfo);

  const int percent = quality_scale_percent(params.quality);
  if (img.channels == 3) {
    jpeg_add_quant_table(&cinfo, 0, kLuminanceTable, percent, TRUE);
    jpeg_add_quant_table(&cinfo, 1, kChrominanceTable, percent, TRUE);
    const int luma = params.subsampling == Subsampling::s420 ? 2 : 1;
    cinfo.comp_info[0].h_samp_factor = luma;
    cinfo.comp_info[0].v_samp_factor = luma;
    for (int c = 1; c < 3; ++c) {
      cinfo.comp_info[c].h_samp_factor = 1;
      cinfo.comp_info[c].v_samp_factor = 1;
    }
  } else {
    const bool chrom = params.table == TableChoice::chrominance;
    jpeg_add_quant_table(&cinfo, 0, chrom ? kChrominanceTable : kLuminanceTable, percent,
                         TRUE);
    cinfo.comp_info[0].h_samp_factor = 1;
    cinfo.comp_info[0].v_samp_factor = 1;
  }

  jpeg_start_compress(&cinfo, TRUE);
  JSAMPROW rows[1] = {row.data()};
  while (cinfo.next_scanline < cinfo.image_height) {
    const int y = static_cast<int>(cinfo.next_scanline);
    if (img.channels == 3) {
      for (int x = 0; x < img.width; ++x)
        for (int c = 0; c < 3; ++c)
          row[static_cast<std::size_t>(x) * 3 + c] = img.at(x, y, c);
    } else {
      for (int x = 0; x < img.width; ++x) row[x] = img.at(x, y);
    }
    jpeg_write_scanlines(&cinfo, rows, 1);
  }
  jpeg_finish_compress(&cinfo);
  jpeg_destroy_compress(&cinfo);

  std::vector<std::uint8_t> out(buffer, buffer + buffer_size);
  std::free(buffer);
  return out;
}

struct QfEstimate {
  int qf = 0;
  bool exact = false;
  TableChoice table = TableChoice::luminance;
};

// Recover the quality factor that produced a quantization table by
// back-matching against the scaled reference tables. Exact matches win
// (lowest matching quality when several qualities yield the same clamped
// table); otherwise the nearest table by L1 distance.
inline QfEstimate estimate_qf(const std::array<std::uint16_t, 64>& observed,
                              bool consider_chrominance) {
  QfEstimate best;
  long best_dist = -1;
  const int table_count = consider_chrominance ? 2 : 1;
  for (int t = 0; t < table_count; ++t) {
    const auto& base = t == 0 ? kLuminanceTable : kChrominanceTable;
    for (int q = 1; q <= 100; ++q) {
      const auto expect = scaled_table(base, q);
      long dist = 0;
      for (int i = 0; i < 64; ++i)
        dist += std::abs(static_cast<long>(expect[i]) - static_cast<long>(observed[i]));
      if (dist == 0) {
        QfEstimate e{q, true, t == 0 ? TableChoice::luminance : TableChoice::chrominance};
        return e;  // q ascends, so the first exact hit is the lowest
      }
      if (best_dist < 0 || dist < best_dist) {
        best_dist = dist;
        best = {q, false, t == 0 ? TableChoice::luminance : TableChoice::chrominance};
      }
    }
  }
  return best;
}

struct JpegInfo {
  int width = 0, height = 0, channels = 0;
  Subsampling subsampling = Subsampling::gray;
  int qf = 0;
  bool qf_exact = false;
  TableChoice table = TableChoice::luminance;
};

inline std::pair<Image, JpegInfo> jpeg_decode(const std::vector<std::uint8_t>& bytes) {
  if (bytes.empty()) throw Error(ErrorCode::decode, "empty jpeg stream");

  jpeg_decompress_struct cinfo;
  detail::JpegErrorTrap trap;
  detail::init_trap(trap);
  cinfo.err = &trap.mgr;

  Image img;
  JpegInfo info;
  std::vector<JSAMPLE> row;

  if (setjmp(trap.env)) {
    jpeg_destroy_decompress(&cinfo);
    throw Error(ErrorCode::decode, std::string("jpeg decode failed: ") + trap.message);
  }

  jpeg_create_decompress(&cinfo);
  jpeg_mem_src(&cinfo, bytes.data(), static_cast<unsigned long>(bytes.size()));
  jpeg_read_header(&cinfo, TRUE);

  info.width = static_cast<int>(cinfo.image_width);
  info.height = static_cast<int>(cinfo.image_height);
  info.channels = cinfo.num_components == 1 ? 1 : 3;

  if (cinfo.num_components == 1) {
    info.subsampling = Subsampling::gray;
  } else if (cinfo.num_components == 3) {
    const int h0 = cinfo.comp_info[0].h_samp_factor;
    const int v0 = cinfo.comp_info[0].v_samp_factor;
    bool chroma_full = true;
    for (int c = 1; c < 3; ++c)
      chroma_full &= cinfo.comp_info[c].h_samp_factor == 1 &&
                     cinfo.comp_info[c].v_samp_factor == 1;
    if (h0 == 1 && v0 == 1 && chroma_full)
      info.subsampling = Subsampling::s444;
    else if (h0 == 2 && v0 == 2 && chroma_full)
      info.subsampling = Subsampling::s420;
    else {
      std::snprintf(trap.message, sizeof(trap.message), "unsupported subsampling layout");
      std::longjmp(trap.env, 1);
    }
  } else {
    std::snprintf(trap.message, sizeof(trap.message), "unsupported component count");
    std::longjmp(trap.env, 1);
  }

  {
    const int slot = cinfo.comp_info[0].quant_tbl_no;
    const JQUANT_TBL* tbl = cinfo.quant_tbl_ptrs[slot];
    if (tbl == nullptr) {
      std::snprintf(trap.message, sizeof(trap.message), "missing quantization table");
      std::longjmp(trap.env, 1);
    }
    std::array<std::uint16_t, 64> observed{};
    for (int i = 0; i < 64; ++i) observed[i] = tbl->quantval[i];
    const QfEstimate est = estimate_qf(observed, /*consider_chrominance=*/info.channels == 1);
    info.qf = est.qf;
    info.qf_exact = est.exact;
    info.table = est.table;
  }

  cinfo.out_color_space = cinfo.num_components == 1 ? JCS_GRAYSCALE : JCS_RGB;
  jpeg_start_decompress(&cinfo);

  img = Image(static_cast<int>(cinfo.output_width), static_cast<int>(cinfo.output_height),
              static_cast<int>(cinfo.output_components));
  row.resize(static_cast<std::size_t>(img.width) * img.channels);
  JSAMPROW rows[1] = {row.data()};
  while (cinfo.output_scanline < cinfo.output_height) {
    const int y = static_cast<int>(cinfo.output_scanline);
    jpeg_read_scanlines(&cinfo, rows, 1);
    if (img.channels == 3) {
      for (int x = 0; x < img.width; ++x)
        for (int c = 0; c < 3; ++c)
          img.at(x, y, c) = row[static_cast<std::size_t>(x) * 3 + c];
    } else {
      for (int x = 0; x < img.width; ++x) img.at(x, y) = row[x];
    }
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);
  return {std::move(img), info};
}

// ---------------------------------------------------------------------------
// SNS recompression emulator
// ---------------------------------------------------------------------------

struct SnsRule {
  Subsampling in_subsampling = Subsampling::s444;
  int qfu_min = 1, qfu_max = 100;
  bool pass_through = true;
  Subsampling out_subsampling = Subsampling::s420;
  int qfd = 85;  // 0 means "use the profile's configured qfd"
};

struct SnsProfile {
  std::string name;
  int max_w = 0, max_h = 0;  // 0 = unlimited
  int configured_qfd = 85;   // re-encode quality when a rule carries qfd = 0
  std::vector<SnsRule> rules;
};

// Built-in provider behavior tables. `qfd` selects the configurable
// re-encode quality used by the facebook profiles (valid range 71..85).
inline SnsProfile builtin_sns_profile(const std::string& name, int qfd = 85) {
  if (qfd < 71 || qfd > 85)
    throw Error(ErrorCode::config, "configured qfd must be in [71,85]");
  SnsProfile p;
  p.name = name;
  p.configured_qfd = qfd;
  auto pass = [](Subsampling in, int lo, int hi) {
    return SnsRule{in, lo, hi, true, Subsampling::s420, 85};
  };
  auto reenc = [](Subsampling in, int lo, int hi, Subsampling out, int q) {
    return SnsRule{in, lo, hi, false, out, q};
  };
  if (name == "twitter") {
    p.max_w = p.max_h = 4096;
    p.rules = {
        pass(Subsampling::s444, 1, 84),
        reenc(Subsampling::s444, 85, 100, Subsampling::s420, 85),
        pass(Subsampling::s420, 1, 84),
        reenc(Subsampling::s420, 85, 100, Subsampling::s420, 85),
        pass(Subsampling::gray, 1, 84),
        reenc(Subsampling::gray, 85, 100, Subsampling::gray, 85),
    };
  } else if (name == "facebook_hq" || name == "facebook_lq") {
    p.max_w = p.max_h = name == "facebook_hq" ? 2048 : 960;
    p.rules = {
        reenc(Subsampling::s444, 1, 100, Subsampling::s420, 0),
        reenc(Subsampling::s420, 1, 100, Subsampling::s420, 0),
        reenc(Subsampling::gray, 1, 100, Subsampling::gray, 0),
    };
  } else if (name == "tumblr" || name == "googleplus" || name == "flickr") {
    if (name == "tumblr") p.max_w = p.max_h = 1280;
    p.rules = {
        pass(Subsampling::s444, 1, 100),
        pass(Subsampling::s420, 1, 100),
        pass(Subsampling::gray, 1, 100),
    };
  } else {
    throw Error(ErrorCode::config, "unknown sns profile '" + name + "'");
  }
  return p;
}

inline SnsProfile sns_profile_from_json(const nlohmann::json& j) {
  SnsProfile p;
  try {
    p.name = j.at("name").get<std::string>();
    p.max_w = j.value("max_w", 0);
    p.max_h = j.value("max_h", 0);
    p.configured_qfd = j.value("qfd", 85);
    for (const auto& r : j.at("rules")) {
      SnsRule rule;
      rule.in_subsampling = subsampling_from_name(r.at("in").get<std::string>());
      rule.qfu_min = r.value("qfu_min", 1);
      rule.qfu_max = r.value("qfu_max", 100);
      rule.pass_through = r.at("action").get<std::string>() == "pass";
      if (!rule.pass_through) {
        rule.out_subsampling = subsampling_from_name(r.at("out").get<std::string>());
        rule.qfd = r.value("qfd", 0);
      }
      p.rules.push_back(rule);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::config, std::string("malformed sns profile: ") + e.what());
  }
  return p;
}

inline SnsProfile load_sns_profile_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot read sns profile '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::config, std::string("malformed sns profile: ") + e.what());
  }
  return sns_profile_from_json(j);
}

// Resolve a profile by name: a JSON policy file in `profile_dir` (when
// set) shadows the built-in table of the same name.
inline SnsProfile resolve_sns_profile(const std::string& name, int qfd = 85,
                                      const char* profile_dir = std::getenv("ETC_PROFILE_DIR")) {
  if (profile_dir != nullptr && *profile_dir != '\0') {
    const std::string path = std::string(profile_dir) + "/" + name + ".json";
    std::ifstream probe(path);
    if (probe.good()) return load_sns_profile_file(path);
  }
  return builtin_sns_profile(name, qfd);
}

// Apply exactly one provider rule to an uploaded JFIF stream: either the
// bytes pass through untouched or the image is decoded and re-encoded at
// the rule's declared subsampling and quality.
inline std::vector<std::uint8_t> sns_emulate(const std::vector<std::uint8_t>& bytes,
                                             const SnsProfile& profile) {
  auto [img, info] = jpeg_decode(bytes);
  if (profile.max_w > 0 && (info.width > profile.max_w || info.height > profile.max_h))
    throw Error(ErrorCode::resolution,
                "input " + std::to_string(info.width) + "x" + std::to_string(info.height) +
                    " exceeds profile '" + profile.name + "' limit " +
                    std::to_string(profile.max_w) + "x" + std::to_string(profile.max_h));

  for (const auto& rule : profile.rules) {
    if (rule.in_subsampling != info.subsampling) continue;
    if (info.qf < rule.qfu_min || info.qf > rule.qfu_max) continue;
    if (rule.pass_through) return bytes;
    JpegParams params;
    params.quality = rule.qfd == 0 ? profile.configured_qfd : rule.qfd;
    params.subsampling = rule.out_subsampling;
    // Grayscale re-encodes use the luminance table, matching observed
    // provider behavior.
    params.table = TableChoice::automatic;
    return jpeg_encode(img, params);
  }
  throw Error(ErrorCode::config,
              "profile '" + profile.name + "' has no rule for this input");
}

// ---------------------------------------------------------------------------
// RD curves
// ---------------------------------------------------------------------------

enum class RdScheme {
  plain_444,
  plain_420,
  conventional_444,
  conventional_420,
  proposed_gray,
};

inline const char* rd_scheme_name(RdScheme s) {
  switch (s) {
    case RdScheme::plain_444: return "plain_444";
    case RdScheme::plain_420: return "plain_420";
    case RdScheme::conventional_444: return "conventional_444";
    case RdScheme::conventional_420: return "conventional_420";
    default: return "proposed_gray";
  }
}

struct RdPoint {
  int qf = 0;
  double bpp = 0.0;      // compressed bits per original pixel
  double psnr_db = 0.0;  // decoded(+decrypted) vs original, corpus average
};

struct PipelineOutcome {
  std::vector<std::uint8_t> bytes;
  Image restored;
};

// One image through one scheme: encrypt (if any) -> encode -> optional
// provider emulation -> decode -> decrypt (if any).
inline PipelineOutcome run_pipeline(const Image& original, RdScheme scheme, int qf,
                                    const KeyFile& key, std::uint32_t image_index = 0,
                                    const SnsProfile* sns = nullptr) {
  KeyFile kf = key;
  kf.nonce = nonce_for_trial(key.nonce, image_index);
  const StepKeys keys = derive_step_keys(kf.master, kf.nonce);

  Image to_encode = original;
  JpegParams params;
  params.quality = qf;
  CipherConfig cfg;
  switch (scheme) {
    case RdScheme::plain_444:
      params.subsampling = Subsampling::s444;
      break;
    case RdScheme::plain_420:
      params.subsampling = Subsampling::s420;
      break;
    case RdScheme::conventional_444:
    case RdScheme::conventional_420:
      cfg.scheme = "conventional";
      cfg.block_w = cfg.block_h = kf.scheme == "conventional" ? kf.block_w : 16;
      to_encode = encrypt(original, keys, cfg);
      params.subsampling = scheme == RdScheme::conventional_420 ? Subsampling::s420
                                                                : Subsampling::s444;
      break;
    case RdScheme::proposed_gray:
      cfg.scheme = "grayscale";
      cfg.block_w = cfg.block_h = kf.scheme == "grayscale" ? kf.block_w : 8;
      cfg.layout = kf.layout;
      to_encode = encrypt(original, keys, cfg);
      params.subsampling = Subsampling::gray;
      params.table = TableChoice::luminance;
      break;
  }

  PipelineOutcome out;
  out.bytes = jpeg_encode(to_encode, params);
  std::vector<std::uint8_t> delivered =
      sns != nullptr ? sns_emulate(out.bytes, *sns) : out.bytes;
  auto [decoded, info] = jpeg_decode(delivered);

  switch (scheme) {
    case RdScheme::plain_444:
    case RdScheme::plain_420:
      out.restored = std::move(decoded);
      break;
    case RdScheme::conventional_444:
    case RdScheme::conventional_420:
    case RdScheme::proposed_gray:
      out.restored = decrypt(decoded, keys, cfg);
      break;
  }
  return out;
}

inline std::vector<RdPoint> rd_curve(const std::vector<Image>& corpus, RdScheme scheme,
                                     const std::vector<int>& qfs, const KeyFile& key,
                                     const SnsProfile* sns = nullptr) {
  if (corpus.empty()) throw Error(ErrorCode::config, "rd_curve needs a nonempty corpus");
  std::vector<RdPoint> points;
  points.reserve(qfs.size());
  for (int qf : qfs) {
    double bpp_acc = 0.0, psnr_acc = 0.0;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      const Image& original = corpus[i];
      PipelineOutcome run =
          run_pipeline(original, scheme, qf, key, static_cast<std::uint32_t>(i), sns);
      bpp_acc += static_cast<double>(run.bytes.size()) * 8.0 /
                 (static_cast<double>(original.width) * original.height);
      psnr_acc += psnr(original, run.restored);
    }
    points.push_back({qf, bpp_acc / static_cast<double>(corpus.size()),
                      psnr_acc / static_cast<double>(corpus.size())});
  }
  return points;
}

}  // namespace etcjpeg
