// Copyright 2026 The RawHDR Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// rawhdr: command-line front end for the raw-domain HDR toolkit.
//
// Subcommands: synthesize | mask | fuse | infer | eval | bench | init-weights.
// Every command is deterministic given its inputs and --seed (default 0);
// validation failures print a single "error: ..." line and exit nonzero.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rawhdr/engine.hpp"
#include "rawhdr/losses.hpp"
#include "rawhdr/metrics.hpp"
#include "rawhdr/pair.hpp"
#include "rawhdr/pgm_io.hpp"

namespace {

using nlohmann::json;

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw rawhdr::IoError("cannot open: " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return text;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw rawhdr::IoError("cannot open for writing: " + path);
  out << text;
  if (!out) throw rawhdr::IoError("short write: " + path);
}

json noise_to_json(const rawhdr::NoiseModel& m) {
  json j;
  j["shot_coeff"] = m.shot_coeff;
  j["read_sigma"] = m.read_sigma;
  j["label"] = m.label;
  return j;
}

rawhdr::NoiseModel noise_from_json_obj(const json& j,
                                       const rawhdr::NoiseModel& base) {
  rawhdr::NoiseModel m = base;
  m.shot_coeff = j.value("shot_coeff", m.shot_coeff);
  m.read_sigma = j.value("read_sigma", m.read_sigma);
  m.label = j.value("label", m.label);
  rawhdr::validate(m);
  return m;
}

// psnr serializes as null when infinite (JSON has no infinity literal).
json psnr_to_json(double v) {
  if (std::isinf(v)) return nullptr;
  return v;
}

rawhdr::net::ArchConfig load_arch(const std::string& path) {
  if (path.empty()) return rawhdr::net::ArchConfig{};
  return rawhdr::net::arch_config_from_json(read_text_file(path));
}

rawhdr::MaskPlane mask_from_tensor(const rawhdr::Tensor& t) {
  if (t.c != 1) throw rawhdr::ValidationError("mask tensor must have 1 channel");
  rawhdr::MaskPlane m(t.h, t.w);
  for (std::size_t i = 0; i < m.v.size(); ++i) {
    const float v = t.v[i];
    if (v != 0.0f && v != 1.0f)
      throw rawhdr::ValidationError("mask tensor must be binary");
    m.v[i] = static_cast<std::uint8_t>(v);
  }
  return m;
}

rawhdr::Tensor mask_to_tensor(const rawhdr::MaskPlane& m) {
  rawhdr::Tensor t(1, m.h, m.w);
  for (std::size_t i = 0; i < m.v.size(); ++i)
    t.v[i] = static_cast<float>(m.v[i]);
  return t;
}

json motion_to_json(const rawhdr::MotionSpec& spec) {
  json j;
  j["rect_w"] = spec.rect_w;
  j["rect_h"] = spec.rect_h;
  j["dx"] = spec.dx;
  j["dy"] = spec.dy;
  j["x0"] = spec.x0;
  j["y0"] = spec.y0;
  return j;
}

// ---------------------------------------------------------------- synthesize

struct SynthesizeArgs {
  std::string raw1, raw2, out_dir, config;
  std::uint64_t seed = 0;
  int ratio = 0;
  bool no_noise = false;
  bool no_motion = false;
};

int cmd_synthesize(const SynthesizeArgs& a) {
  rawhdr::PairConfig cfg;
  if (!a.config.empty()) {
    const auto j = json::parse(read_text_file(a.config));
    cfg.ratio = j.value("ratio", cfg.ratio);
    if (j.contains("allowed_ratios"))
      cfg.allowed_ratios = j.at("allowed_ratios").get<std::vector<int>>();
    cfg.bit_depth = j.value("bit_depth", cfg.bit_depth);
    if (j.contains("noise_long"))
      cfg.noise_long = noise_from_json_obj(j.at("noise_long"), cfg.noise_long);
    if (j.contains("noise_short"))
      cfg.noise_short =
          noise_from_json_obj(j.at("noise_short"), cfg.noise_short);
  }
  cfg.seed = a.seed;
  if (a.ratio != 0) cfg.ratio = a.ratio;
  if (a.no_noise) {
    cfg.noise_long = {0.0, 0.0, "long"};
    cfg.noise_short = {0.0, 0.0, "short"};
  }
  rawhdr::validate(cfg);

  const rawhdr::PackedRaw clean1 =
      rawhdr::normalize_levels(rawhdr::read_pgm_raw(a.raw1));
  const rawhdr::PackedRaw clean2 =
      rawhdr::normalize_levels(rawhdr::read_pgm_raw(a.raw2));

  const rawhdr::PairSample sample =
      a.no_motion ? rawhdr::form_pair(clean1, clean2, cfg)
                  : rawhdr::build_quadruplet(clean1, clean2, cfg);

  std::filesystem::create_directories(a.out_dir);
  const std::filesystem::path dir(a.out_dir);
  rawhdr::write_rten((dir / "long.rten").string(),
                     rawhdr::to_tensor(sample.long_exposure));
  rawhdr::write_rten((dir / "short.rten").string(),
                     rawhdr::to_tensor(sample.short_exposure));
  rawhdr::write_rten((dir / "gt.rten").string(), rawhdr::to_tensor(sample.gt));
  if (sample.mask)
    rawhdr::write_rten((dir / "mask.rten").string(),
                       mask_to_tensor(*sample.mask));

  json manifest;
  manifest["ratio"] = sample.ratio;
  manifest["seed"] = cfg.seed;
  manifest["bit_depth"] = cfg.bit_depth;
  manifest["aligned"] = true;  // LDRs are in the scene-linear short domain
  manifest["noise_long"] = noise_to_json(cfg.noise_long);
  manifest["noise_short"] = noise_to_json(cfg.noise_short);
  if (sample.motion) manifest["motion"] = motion_to_json(*sample.motion);
  json files;
  files["long"] = "long.rten";
  files["short"] = "short.rten";
  files["gt"] = "gt.rten";
  if (sample.mask) files["mask"] = "mask.rten";
  manifest["files"] = std::move(files);
  write_text_file((dir / "manifest.json").string(), manifest.dump(2) + "\n");

  std::cout << "wrote quadruplet (ratio " << sample.ratio << ") to "
            << a.out_dir << "\n";
  return 0;
}

// ---------------------------------------------------------------------- mask

struct MaskArgs {
  std::string input, out, out_mask, out_spec;
  std::uint64_t seed = 0;
};

int cmd_mask(const MaskArgs& a) {
  const rawhdr::Tensor in = rawhdr::read_rten(a.input);
  const rawhdr::PackedRaw packed = rawhdr::to_packed(in);
  auto [moved, mask, spec] = rawhdr::synth_motion(packed, a.seed);
  rawhdr::write_rten(a.out, rawhdr::to_tensor(moved));
  rawhdr::write_rten(a.out_mask, mask_to_tensor(mask));
  if (!a.out_spec.empty())
    write_text_file(a.out_spec, motion_to_json(spec).dump(2) + "\n");
  return 0;
}

// ---------------------------------------------------------------------- fuse

struct FuseArgs {
  std::string arch, weights_in, weights_out, arch_out;
  int size = 256;
};

int cmd_fuse(const FuseArgs& a) {
  const rawhdr::net::ArchConfig cfg = load_arch(a.arch);
  if (cfg.block != "tcb")
    throw rawhdr::ValidationError(
        "weights are already fused (arch block is 'plain')");
  const rawhdr::net::ModelGraph g = rawhdr::net::build_dualunet(cfg);
  const rawhdr::net::WeightStore store =
      rawhdr::net::load_weights(a.weights_in);

  const rawhdr::net::ModelGraph fused_graph = rawhdr::net::fuse_model(g);
  const rawhdr::net::WeightStore fused_store =
      rawhdr::net::fuse_weights(g, store);
  rawhdr::net::save_weights(a.weights_out, fused_store);

  rawhdr::net::ArchConfig fused_cfg = cfg;
  fused_cfg.block = "plain";
  std::string arch_out = a.arch_out;
  if (arch_out.empty()) {
    std::filesystem::path p(a.weights_out);
    p.replace_extension(".arch.json");
    arch_out = p.string();
  }
  write_text_file(arch_out, rawhdr::net::arch_config_to_json(fused_cfg) + "\n");

  const auto before = rawhdr::net::count_params_flops(g, a.size, a.size);
  const auto after =
      rawhdr::net::count_params_flops(fused_graph, a.size, a.size);
  std::printf("%-16s %14s %16s\n", "graph", "params", "flops");
  std::printf("%-16s %14llu %16llu\n", "multibranch",
              static_cast<unsigned long long>(before.params),
              static_cast<unsigned long long>(before.flops));
  std::printf("%-16s %14llu %16llu\n", "fused",
              static_cast<unsigned long long>(after.params),
              static_cast<unsigned long long>(after.flops));
  std::printf("(flops at 4x%dx%d input)\n", a.size, a.size);
  return 0;
}

// --------------------------------------------------------------------- infer

struct InferArgs {
  std::string arch, weights, short_in, long_in, out;
};

int cmd_infer(const InferArgs& a) {
  const rawhdr::net::ArchConfig cfg = load_arch(a.arch);
  const rawhdr::net::ModelGraph g = rawhdr::net::build_dualunet(cfg);
  const rawhdr::net::WeightStore store = rawhdr::net::load_weights(a.weights);
  const rawhdr::Tensor short_in = rawhdr::read_rten(a.short_in);
  const rawhdr::Tensor long_in = rawhdr::read_rten(a.long_in);
  const rawhdr::Tensor out =
      rawhdr::engine::forward(g, store, short_in, long_in);
  rawhdr::write_rten(a.out, out);
  return 0;
}

// ---------------------------------------------------------------------- eval

struct EvalArgs {
  std::vector<std::string> outs, gts, masks;
  std::string loss_weights, report_path;
  bool with_losses = false;
};

int cmd_eval(const EvalArgs& a) {
  if (a.outs.size() != a.gts.size() || a.outs.empty())
    throw rawhdr::ValidationError("--out and --gt must pair up");
  if (!a.masks.empty() && a.masks.size() != a.outs.size())
    throw rawhdr::ValidationError(
        "--mask must be given for every pair or none");
  rawhdr::LossWeights weights;
  if (!a.loss_weights.empty())
    weights = rawhdr::loss_weights_from_json(read_text_file(a.loss_weights));

  json pairs = json::array();
  double sum_psnr = 0.0, sum_ssim = 0.0, sum_msssim = 0.0, sum_de = 0.0;
  bool psnr_inf = false;
  for (std::size_t i = 0; i < a.outs.size(); ++i) {
    const rawhdr::PackedRaw out =
        rawhdr::to_packed(rawhdr::read_rten(a.outs[i]));
    const rawhdr::PackedRaw gt = rawhdr::to_packed(rawhdr::read_rten(a.gts[i]));
    const rawhdr::MetricsReport m = rawhdr::evaluate_metrics(out, gt);
    json entry;
    entry["out"] = a.outs[i];
    entry["gt"] = a.gts[i];
    entry["psnr"] = psnr_to_json(m.psnr);
    entry["ssim"] = m.ssim;
    entry["ms_ssim"] = m.ms_ssim;
    entry["delta_e"] = m.delta_e;
    if (a.with_losses) {
      std::optional<rawhdr::MaskPlane> mask;
      if (!a.masks.empty())
        mask = mask_from_tensor(rawhdr::read_rten(a.masks[i]));
      const rawhdr::LossReport lr =
          rawhdr::total_loss(out, gt, mask ? &*mask : nullptr, weights);
      json lj;
      lj["l_pix"] = lr.l_pix;
      lj["l_ssim"] = lr.l_ssim;
      lj["l_amss"] = lr.l_amss;
      lj["l_bayer"] = lr.l_bayer;
      lj["total"] = lr.total;
      entry["losses"] = std::move(lj);
    }
    pairs.push_back(std::move(entry));
    if (std::isinf(m.psnr)) psnr_inf = true;
    sum_psnr += m.psnr;
    sum_ssim += m.ssim;
    sum_msssim += m.ms_ssim;
    sum_de += m.delta_e;
  }

  const double n = static_cast<double>(a.outs.size());
  json report;
  report["pairs"] = std::move(pairs);
  json mean;
  mean["psnr"] = psnr_inf ? json(nullptr) : json(sum_psnr / n);
  mean["ssim"] = sum_ssim / n;
  mean["ms_ssim"] = sum_msssim / n;
  mean["delta_e"] = sum_de / n;
  report["mean"] = std::move(mean);

  const std::string text = report.dump(2) + "\n";
  if (a.report_path.empty()) {
    std::cout << text;
  } else {
    write_text_file(a.report_path, text);
  }
  return 0;
}

// --------------------------------------------------------------------- bench

struct BenchArgs {
  std::string arch, report_path;
  int size = 512;
  int repeats = 20;
  int warmup = 2;
  std::uint64_t seed = 0;
};

int cmd_bench(const BenchArgs& a) {
  rawhdr::net::ArchConfig cfg = load_arch(a.arch);
  cfg.block = "tcb";
  const rawhdr::net::ModelGraph g = rawhdr::net::build_dualunet(cfg);
  const rawhdr::net::WeightStore store =
      rawhdr::net::init_random_weights(g, a.seed);
  const rawhdr::net::ModelGraph fused = rawhdr::net::fuse_model(g);
  const rawhdr::net::WeightStore fused_store =
      rawhdr::net::fuse_weights(g, store);
  const rawhdr::engine::BenchReport report = rawhdr::engine::benchmark(
      g, store, fused, fused_store, a.size, a.size, a.repeats, a.warmup,
      a.seed);
  const std::string text = rawhdr::engine::bench_report_to_json(report) + "\n";
  if (a.report_path.empty()) {
    std::cout << text;
  } else {
    write_text_file(a.report_path, text);
  }
  return 0;
}

// -------------------------------------------------------------- init-weights

struct InitWeightsArgs {
  std::string arch, out;
  std::uint64_t seed = 0;
};

int cmd_init_weights(const InitWeightsArgs& a) {
  const rawhdr::net::ArchConfig cfg = load_arch(a.arch);
  const rawhdr::net::ModelGraph g = rawhdr::net::build_dualunet(cfg);
  rawhdr::net::save_weights(a.out,
                            rawhdr::net::init_random_weights(g, a.seed));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"raw-domain HDR toolkit: double-exposure pair synthesis, "
               "reparameterized UNet inference, metrics"};
  app.require_subcommand(1);

  SynthesizeArgs synth;
  auto* s = app.add_subcommand(
      "synthesize",
      "build a noisy long/short/gt/mask quadruplet from two clean raws");
  s->add_option("--raw1", synth.raw1, "long-exposure source PGM")->required();
  s->add_option("--raw2", synth.raw2, "short/gt source PGM")->required();
  s->add_option("--out-dir", synth.out_dir, "output directory")->required();
  s->add_option("--config", synth.config, "pair config JSON");
  s->add_option("--seed", synth.seed, "random seed (default 0)");
  s->add_option("--ratio", synth.ratio, "exposure ratio (0 = sample)");
  s->add_flag("--no-noise", synth.no_noise, "disable noise synthesis");
  s->add_flag("--no-motion", synth.no_motion, "skip motion mask synthesis");

  MaskArgs mask;
  auto* m =
      app.add_subcommand("mask", "synthesize a motion mask on a packed tensor");
  m->add_option("--in", mask.input, "input packed RTEN")->required();
  m->add_option("--out", mask.out, "displaced output RTEN")->required();
  m->add_option("--out-mask", mask.out_mask, "mask RTEN")->required();
  m->add_option("--out-spec", mask.out_spec, "motion spec JSON");
  m->add_option("--seed", mask.seed, "random seed (default 0)");

  FuseArgs fuse;
  auto* f = app.add_subcommand(
      "fuse", "collapse multi-branch blocks into dense 3x3 convolutions");
  f->add_option("--arch", fuse.arch, "arch config JSON (default built-in)");
  f->add_option("--weights", fuse.weights_in, "input weight manifest")
      ->required();
  f->add_option("--weights-out", fuse.weights_out, "fused weight manifest")
      ->required();
  f->add_option("--arch-out", fuse.arch_out, "fused arch JSON path");
  f->add_option("--size", fuse.size, "plane size for the FLOP table");

  InferArgs infer;
  auto* i = app.add_subcommand("infer", "run the network on a tensor pair");
  i->add_option("--arch", infer.arch, "arch config JSON (default built-in)");
  i->add_option("--weights", infer.weights, "weight manifest")->required();
  i->add_option("--short", infer.short_in, "short exposure RTEN")->required();
  i->add_option("--long", infer.long_in, "long exposure RTEN")->required();
  i->add_option("--out", infer.out, "output RTEN")->required();

  EvalArgs eval;
  auto* e = app.add_subcommand(
      "eval", "quality metrics (and losses) on output/ground-truth pairs");
  e->add_option("--out", eval.outs, "network output RTEN (repeatable)")
      ->required();
  e->add_option("--gt", eval.gts, "ground truth RTEN (repeatable)")
      ->required();
  e->add_option("--mask", eval.masks, "motion mask RTEN (repeatable)");
  e->add_flag("--losses", eval.with_losses, "also report the loss components");
  e->add_option("--loss-weights", eval.loss_weights, "loss weight JSON");
  e->add_option("--report", eval.report_path,
                "write JSON here (default stdout)");

  BenchArgs bench;
  auto* b = app.add_subcommand("bench", "time multi-branch vs fused forward");
  b->add_option("--arch", bench.arch, "arch config JSON (default built-in)");
  b->add_option("--size", bench.size, "packed plane size (default 512)");
  b->add_option("--repeats", bench.repeats, "timed runs (default 20)");
  b->add_option("--warmup", bench.warmup, "untimed runs (default 2)");
  b->add_option("--seed", bench.seed, "random seed (default 0)");
  b->add_option("--report", bench.report_path, "write JSON here");

  InitWeightsArgs init;
  auto* w = app.add_subcommand("init-weights",
                               "emit a reproducible random weight manifest");
  w->add_option("--arch", init.arch, "arch config JSON (default built-in)");
  w->add_option("--out", init.out, "manifest path")->required();
  w->add_option("--seed", init.seed, "random seed (default 0)");

  try {
    app.parse(argc, argv);
    if (s->parsed()) return cmd_synthesize(synth);
    if (m->parsed()) return cmd_mask(mask);
    if (f->parsed()) return cmd_fuse(fuse);
    if (i->parsed()) return cmd_infer(infer);
    if (e->parsed()) return cmd_eval(eval);
    if (b->parsed()) return cmd_bench(bench);
    if (w->parsed()) return cmd_init_weights(init);
  } catch (const CLI::ParseError& err) {
    if (err.get_exit_code() == 0) return app.exit(err);
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return 0;
}
