// Command-line front end: key generation, encryption/decryption,
// compression round-trip reports, key-space reports, and the
// jigsaw-solver attack harness. Every command writes a JSON run manifest
// next to its primary output.

#include <sys/stat.h>
#include <unistd.h>

#include <cctype>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <etcjpeg/etcjpeg.hpp>

namespace {

using namespace etcjpeg;

std::string lowercase_ext(const std::string& path) {
  const auto dot = path.rfind('.');
  if (dot == std::string::npos) return "";
  std::string ext = path.substr(dot + 1);
  for (char& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return ext;
}

bool is_jpeg_ext(const std::string& path) {
  const std::string ext = lowercase_ext(path);
  return ext == "jpg" || ext == "jpeg";
}

std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot read '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::string& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::io, "cannot write '" + path + "'");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

Image load_image(const std::string& path) {
  if (is_jpeg_ext(path)) return jpeg_decode(read_file(path)).first;
  return read_pnm(path);
}

// Collects input/output hashes and emits the run manifest.
class Manifest {
 public:
  Manifest(std::string command) : command_(std::move(command)) {}

  void param(const std::string& key, const nlohmann::json& value) { params_[key] = value; }
  void input(const std::string& path) { inputs_[path] = content_hash(read_file(path)); }
  void output(const std::string& path) { outputs_[path] = content_hash(read_file(path)); }

  void write(const std::string& primary_output) const {
    nlohmann::json j;
    j["command"] = command_;
    j["parameters"] = params_;
    j["inputs"] = inputs_;
    j["outputs"] = outputs_;
    j["tool_version"] = kVersion;
    j["timestamp"] = static_cast<std::int64_t>(
        std::chrono::duration_cast<std::chrono::seconds>(
            std::chrono::system_clock::now().time_since_epoch())
            .count());
    std::ofstream out(primary_output + ".manifest.json", std::ios::trunc);
    if (!out)
      throw Error(ErrorCode::io, "cannot write manifest for '" + primary_output + "'");
    out << j.dump(2) << '\n';
  }

 private:
  std::string command_;
  nlohmann::json params_ = nlohmann::json::object();
  std::map<std::string, std::string> inputs_;
  std::map<std::string, std::string> outputs_;
};

struct CommonFlags {
  std::string seed_hex;
};

KeyFile make_key_material(const CommonFlags& common) {
  KeyFile kf;
  if (!common.seed_hex.empty())
    seed_key_material(common.seed_hex, kf.master, kf.nonce);
  else
    random_key_material(kf.master, kf.nonce);
  return kf;
}

int cmd_keygen(const std::string& out_path, const std::string& scheme, int block,
               const std::string& layout, const std::vector<int>& size,
               const CommonFlags& common) {
  KeyFile kf = make_key_material(common);
  kf.scheme = scheme;
  validate_scheme(scheme);
  kf.block_w = kf.block_h = block > 0 ? block : (scheme == "conventional" ? 16 : 8);
  kf.layout = layout_from_name(layout);
  if (!size.empty()) {
    kf.original_w = size[0];
    kf.original_h = size[1];
  }
  ::unlink(out_path.c_str());  // key files are written read-only; replace atomically
  save_key_file(out_path, kf);

  Manifest m("keygen");
  m.param("scheme", kf.scheme);
  m.param("block", {kf.block_w, kf.block_h});
  m.param("layout", layout_name(kf.layout));
  m.param("seeded", !common.seed_hex.empty());
  m.output(out_path);
  m.write(out_path);
  std::cout << "wrote " << out_path << " (" << kf.scheme << ", block " << kf.block_w << "x"
            << kf.block_h << ", layout " << layout_name(kf.layout) << ")\n";
  return 0;
}

JpegParams jpeg_params_for(const KeyFile& kf, int qf, const std::string& subsampling,
                           const std::string& table) {
  JpegParams p;
  p.quality = qf;
  if (!subsampling.empty())
    p.subsampling = subsampling_from_name(subsampling);
  else
    p.subsampling = kf.scheme == "grayscale" ? Subsampling::gray : Subsampling::s444;
  if (!table.empty()) p.table = table_choice_from_name(table);
  if (kf.scheme == "grayscale" && p.subsampling != Subsampling::gray)
    throw Error(ErrorCode::config,
                "grayscale-scheme ciphertext must use grayscale subsampling");
  return p;
}

int cmd_encrypt(const std::string& in_path, const std::string& key_path,
                const std::string& out_path, const std::string& truth_path, int qf,
                const std::string& subsampling, const std::string& table) {
  const KeyFile kf = load_key_file(key_path);
  const Image img = load_image(in_path);
  const StepKeys keys = derive_step_keys(kf.master, kf.nonce);
  const CipherConfig cfg = cipher_config_from_key(kf);
  CipherResult res = encrypt_with_record(img, keys, cfg);

  if (is_jpeg_ext(out_path)) {
    write_file(out_path, jpeg_encode(res.image, jpeg_params_for(kf, qf, subsampling, table)));
  } else {
    write_pnm(out_path, res.image);
  }
  if (!truth_path.empty()) {
    std::ofstream t(truth_path, std::ios::trunc);
    if (!t) throw Error(ErrorCode::io, "cannot write '" + truth_path + "'");
    t << record_to_json(res.record).dump(2) << '\n';
  }

  Manifest m("encrypt");
  m.param("key", key_path);
  m.param("scheme", kf.scheme);
  m.input(in_path);
  m.input(key_path);
  m.output(out_path);
  if (!truth_path.empty()) m.output(truth_path);
  m.write(out_path);
  std::cout << "encrypted " << in_path << " -> " << out_path << "\n";
  return 0;
}

int cmd_decrypt(const std::string& in_path, const std::string& key_path,
                const std::string& out_path) {
  const KeyFile kf = load_key_file(key_path);
  const Image img = load_image(in_path);
  const StepKeys keys = derive_step_keys(kf.master, kf.nonce);
  const CipherConfig cfg = cipher_config_from_key(kf);
  const Image out = decrypt(img, keys, cfg);
  write_pnm(out_path, out);

  Manifest m("decrypt");
  m.param("key", key_path);
  m.param("scheme", kf.scheme);
  m.input(in_path);
  m.input(key_path);
  m.output(out_path);
  m.write(out_path);
  std::cout << "decrypted " << in_path << " -> " << out_path << "\n";
  return 0;
}

int cmd_roundtrip(const std::string& in_path, const std::string& key_path, int qf,
                  const std::string& subsampling, const std::string& table,
                  const std::string& sns_name, int sns_qfd, const std::string& out_path) {
  const KeyFile kf = load_key_file(key_path);
  const Image original = load_image(in_path);
  const StepKeys keys = derive_step_keys(kf.master, kf.nonce);
  const CipherConfig cfg = cipher_config_from_key(kf);
  const JpegParams params = jpeg_params_for(kf, qf, subsampling, table);

  const Image encrypted = encrypt(original, keys, cfg);
  const std::vector<std::uint8_t> uploaded = jpeg_encode(encrypted, params);
  std::vector<std::uint8_t> downloaded = uploaded;
  if (!sns_name.empty() && sns_name != "none")
    downloaded = sns_emulate(uploaded, resolve_sns_profile(sns_name, sns_qfd));
  auto [decoded, info] = jpeg_decode(downloaded);
  const Image restored = decrypt(decoded, keys, cfg);
  const double db = psnr(original, restored);
  const double bpp = static_cast<double>(downloaded.size()) * 8.0 /
                     (static_cast<double>(original.width) * original.height);

  std::ofstream out(out_path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::io, "cannot write '" + out_path + "'");
  out << "image,scheme,block,qf,subsampling,table,sns,downloaded_subsampling,"
         "downloaded_qf,bpp,psnr_db\n";
  out << in_path << ',' << kf.scheme << ',' << kf.block_w << ',' << qf << ','
      << subsampling_name(params.subsampling) << ',' << table_choice_name(params.table)
      << ',' << (sns_name.empty() ? "none" : sns_name) << ','
      << subsampling_name(info.subsampling) << ',' << info.qf << ',' << bpp << ','
      << psnr_to_string(db) << '\n';
  out.close();

  Manifest m("roundtrip");
  m.param("key", key_path);
  m.param("qf", qf);
  m.param("sns", sns_name.empty() ? "none" : sns_name);
  m.param("sns_qfd", sns_qfd);
  m.input(in_path);
  m.input(key_path);
  m.output(out_path);
  m.write(out_path);
  std::cout << "psnr_db=" << psnr_to_string(db) << " bpp=" << bpp << " -> " << out_path
            << "\n";
  return 0;
}

int cmd_keyspace(int width, int height, int block_w, int block_h,
                 const std::string& out_path) {
  const std::size_t n = block_count(width, height, block_w, block_h);
  const KeySpaceReport r = keyspace_report(n);
  char log_a[32], log_b[32];
  std::snprintf(log_a, sizeof(log_a), "%.3f", r.log2_n_a);
  std::snprintf(log_b, sizeof(log_b), "%.3f", r.log2_n_b);

  nlohmann::json j;
  j["width"] = width;
  j["height"] = height;
  j["block"] = {block_w, block_h};
  j["n"] = n;
  j["n_s"] = r.n_s.get_str();
  j["n_ri"] = r.n_ri.get_str();
  j["n_n"] = r.n_n.get_str();
  j["n_c"] = r.n_c.get_str();
  j["n_a"] = r.n_a.get_str();
  j["n_b"] = r.n_b.get_str();
  j["log2_n_a"] = log_a;
  j["log2_n_b"] = log_b;

  std::cout << "n=" << n << " log2(n_a)=" << log_a << " log2(n_b)=" << log_b << "\n";
  if (!out_path.empty()) {
    std::ofstream out(out_path, std::ios::trunc);
    if (!out) throw Error(ErrorCode::io, "cannot write '" + out_path + "'");
    out << j.dump(2) << '\n';
    out.close();
    Manifest m("keyspace");
    m.param("width", width);
    m.param("height", height);
    m.param("block", {block_w, block_h});
    m.output(out_path);
    m.write(out_path);
  } else {
    std::cout << j.dump(2) << '\n';
  }
  return 0;
}

int cmd_attack(const std::string& in_path, const std::string& truth_path, int block,
               const std::string& metric, bool no_variants, std::uint64_t seed, int trials,
               double budget, const std::string& out_path, const std::string& preview_path) {
  if (trials < 1) throw Error(ErrorCode::config, "trials must be at least 1");
  const Image enc = load_image(in_path);
  std::ifstream t(truth_path);
  if (!t) throw Error(ErrorCode::io, "cannot read '" + truth_path + "'");
  nlohmann::json tj;
  try {
    t >> tj;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::config, std::string("malformed truth record: ") + e.what());
  }
  const TransformRecord truth = record_from_json(tj);

  BlockGrid grid = split_blocks(enc, block, block);
  if (static_cast<std::size_t>(grid.cols) != truth.cols ||
      static_cast<std::size_t>(grid.rows) != truth.rows)
    throw Error(ErrorCode::grid, "truth record grid does not match the image grid");

  SolverConfig cfg;
  cfg.metric = compatibility_from_name(metric);
  cfg.variant_search = !no_variants;
  cfg.time_budget_seconds = budget / trials;
  // Several solver runs with distinct tie-break seeds; keep the best score.
  PuzzleAssembly assembly;
  AssemblyScore score{-1.0, 0.0, 0.0};
  for (int t = 0; t < trials; ++t) {
    cfg.seed = seed + static_cast<std::uint64_t>(t);
    PuzzleAssembly attempt = solve(grid.tiles, truth.cols, truth.rows, cfg);
    const AssemblyScore s = best_frame_score(attempt, truth);
    if (s.dc + s.nc + s.lc > score.dc + score.nc + score.lc) {
      score = s;
      assembly = std::move(attempt);
    }
  }

  std::ofstream out(out_path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::io, "cannot write '" + out_path + "'");
  char row[160];
  std::snprintf(row, sizeof(row), "%.6f,%.6f,%.6f", score.dc, score.nc, score.lc);
  out << "image,block,metric,variants,trials,dc,nc,lc\n";
  out << in_path << ',' << block << ',' << metric << ',' << (no_variants ? 0 : 1) << ','
      << trials << ',' << row << '\n';
  out.close();

  if (!preview_path.empty()) write_pnm(preview_path, render_assembly(grid.tiles, assembly));

  Manifest m("attack");
  m.param("block", block);
  m.param("metric", metric);
  m.param("variants", !no_variants);
  m.param("seed", seed);
  m.param("trials", trials);
  m.input(in_path);
  m.input(truth_path);
  m.output(out_path);
  if (!preview_path.empty()) m.output(preview_path);
  m.write(out_path);
  std::cout << "dc=" << score.dc << " nc=" << score.nc << " lc=" << score.lc << " -> "
            << out_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Block-scrambling image encryption harness for "
               "encryption-then-compression experiments"};
  app.require_subcommand(1);
  CommonFlags common;

  // keygen
  auto* keygen = app.add_subcommand("keygen", "Generate a key file");
  std::string kg_out, kg_scheme = "grayscale", kg_layout = "h";
  int kg_block = 0;
  std::vector<int> kg_size;
  keygen->add_option("--out", kg_out, "Key file path")->required();
  keygen->add_option("--scheme", kg_scheme, "conventional|grayscale")
      ->check(CLI::IsMember({"conventional", "grayscale"}));
  keygen->add_option("--block", kg_block, "Square block size (default 16/8 by scheme)");
  keygen->add_option("--layout", kg_layout, "Plane packing: h|v");
  keygen->add_option("--size", kg_size, "Bind the key to an image size: W H")->expected(2);
  keygen->add_option("--seed", common.seed_hex, "Hex seed for reproducible key material");

  // encrypt
  auto* encrypt_cmd = app.add_subcommand("encrypt", "Encrypt an image");
  std::string en_in, en_key, en_out, en_truth, en_sub, en_table;
  int en_qf = 85;
  encrypt_cmd->add_option("--in", en_in, "Input image (.ppm/.pgm/.jpg)")->required();
  encrypt_cmd->add_option("--key", en_key, "Key file")->required();
  encrypt_cmd->add_option("--out", en_out, "Output image (.ppm/.pgm/.jpg)")->required();
  encrypt_cmd->add_option("--truth", en_truth, "Also write the transform record JSON");
  encrypt_cmd->add_option("--qf", en_qf, "Quality when writing JPEG output");
  encrypt_cmd->add_option("--subsampling", en_sub, "444|420|gray for JPEG output");
  encrypt_cmd->add_option("--table", en_table, "lum|chrom for grayscale JPEG output");

  // decrypt
  auto* decrypt_cmd = app.add_subcommand("decrypt", "Decrypt an image");
  std::string de_in, de_key, de_out;
  decrypt_cmd->add_option("--in", de_in, "Ciphertext image (.pgm/.ppm/.jpg)")->required();
  decrypt_cmd->add_option("--key", de_key, "Key file")->required();
  decrypt_cmd->add_option("--out", de_out, "Output image (.ppm)")->required();

  // roundtrip
  auto* roundtrip = app.add_subcommand(
      "roundtrip", "Encrypt, compress, optionally emulate a provider, decode, decrypt");
  std::string rt_in, rt_key, rt_sub, rt_table, rt_sns = "none", rt_out;
  int rt_qf = 85, rt_sns_qfd = 85;
  roundtrip->add_option("--in", rt_in, "Input image")->required();
  roundtrip->add_option("--key", rt_key, "Key file")->required();
  roundtrip->add_option("--qf", rt_qf, "JPEG quality factor");
  roundtrip->add_option("--subsampling", rt_sub, "444|420|gray");
  roundtrip->add_option("--table", rt_table, "lum|chrom (grayscale streams)");
  roundtrip->add_option("--sns", rt_sns,
                        "twitter|facebook_hq|facebook_lq|tumblr|googleplus|flickr|none");
  roundtrip->add_option("--sns-qfd", rt_sns_qfd, "Configured re-encode quality [71,85]");
  roundtrip->add_option("--out", rt_out, "Report CSV path")->required();

  // keyspace
  auto* keyspace = app.add_subcommand("keyspace", "Exact key-space report");
  int ks_w = 0, ks_h = 0, ks_bw = 16, ks_bh = 16, ks_block = 0;
  std::string ks_out;
  keyspace->add_option("--width", ks_w, "Image width")->required();
  keyspace->add_option("--height", ks_h, "Image height")->required();
  keyspace->add_option("--block", ks_block, "Square block size (overrides -bw/-bh)");
  keyspace->add_option("--block-w", ks_bw, "Block width");
  keyspace->add_option("--block-h", ks_bh, "Block height");
  keyspace->add_option("--out", ks_out, "Write the report JSON here");

  // attack
  auto* attack = app.add_subcommand("attack", "Jigsaw-solver attack on a ciphertext");
  std::string at_in, at_truth, at_metric = "mgc", at_out, at_preview;
  int at_block = 0;
  bool at_no_variants = false;
  std::uint64_t at_seed = 0;
  int at_trials = 1;
  double at_budget = 1800.0;
  attack->add_option("--in", at_in, "Encrypted image")->required();
  attack->add_option("--truth", at_truth, "Transform record JSON")->required();
  attack->add_option("--block", at_block, "Block size")->required();
  attack->add_option("--metric", at_metric, "mgc|ssd")
      ->check(CLI::IsMember({"mgc", "ssd"}));
  attack->add_flag("--no-variants", at_no_variants,
                   "Disable pose/polarity hypothesis search");
  attack->add_option("--seed", at_seed, "Tie-break seed");
  attack->add_option("--trials", at_trials, "Solver restarts with distinct seeds");
  attack->add_option("--budget", at_budget, "Total time budget in seconds");
  attack->add_option("--out", at_out, "Score CSV path")->required();
  attack->add_option("--preview", at_preview, "Write the reassembled image here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (keygen->parsed())
      return cmd_keygen(kg_out, kg_scheme, kg_block, kg_layout, kg_size, common);
    if (encrypt_cmd->parsed())
      return cmd_encrypt(en_in, en_key, en_out, en_truth, en_qf, en_sub, en_table);
    if (decrypt_cmd->parsed()) return cmd_decrypt(de_in, de_key, de_out);
    if (roundtrip->parsed())
      return cmd_roundtrip(rt_in, rt_key, rt_qf, rt_sub, rt_table, rt_sns, rt_sns_qfd,
                           rt_out);
    if (keyspace->parsed())
      return cmd_keyspace(ks_w, ks_h, ks_block > 0 ? ks_block : ks_bw,
                          ks_block > 0 ? ks_block : ks_bh, ks_out);
    if (attack->parsed())
      return cmd_attack(at_in, at_truth, at_block, at_metric, at_no_variants, at_seed,
                        at_trials, at_budget, at_out, at_preview);
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "E_IO: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
