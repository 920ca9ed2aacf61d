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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <doctest.h>
#include <json.hpp>

#include "rawhdr/tensor.hpp"
#include "support/oracles.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "rawhdr_cli_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

CliResult run_cli(const std::string& args, const fs::path& dir) {
  const fs::path out_file = dir / "_stdout.txt";
  const fs::path err_file = dir / "_stderr.txt";
  const std::string cmd = std::string(RAWHDR_CLI_PATH) + " " + args + " >" +
                          out_file.string() + " 2>" + err_file.string();
  const int status = std::system(cmd.c_str());
  CliResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out_file);
  r.err = slurp(err_file);
  return r;
}

std::string data_file(const std::string& name) {
  return (fs::path(RAWHDR_TEST_DATA) / name).string();
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("synthesize writes the quadruplet and a parsable manifest") {
  const fs::path dir = fresh_dir("synth");
  const CliResult r = run_cli("synthesize --raw1 " + data_file("scene_a.pgm") +
                                  " --raw2 " + data_file("scene_b.pgm") +
                                  " --out-dir " + (dir / "q").string() +
                                  " --seed 42",
                              dir);
  REQUIRE_MESSAGE(r.exit_code == 0, r.err);
  for (const char* name :
       {"long.rten", "short.rten", "gt.rten", "mask.rten", "manifest.json"})
    CHECK(fs::exists(dir / "q" / name));

  const json manifest = json::parse(slurp(dir / "q" / "manifest.json"));
  const int ratio = manifest.at("ratio").get<int>();
  CHECK((ratio == 4 || ratio == 8 || ratio == 16));
  CHECK(manifest.at("seed").get<int>() == 42);
  CHECK(manifest.at("aligned").get<bool>());
  CHECK(manifest.at("motion").at("rect_w").get<int>() >= 40);

  const rawhdr::Tensor long_t = rawhdr::read_rten((dir / "q" / "long.rten").string());
  CHECK(long_t.c == 4);
  CHECK(long_t.h == 256);
  CHECK(long_t.w == 256);
}

TEST_CASE("synthesize is reproducible for a fixed seed") {
  const fs::path dir = fresh_dir("synth_repro");
  const std::string base = "synthesize --raw1 " + data_file("scene_a.pgm") +
                           " --raw2 " + data_file("scene_b.pgm") + " --seed 7";
  REQUIRE(run_cli(base + " --out-dir " + (dir / "a").string(), dir).exit_code == 0);
  REQUIRE(run_cli(base + " --out-dir " + (dir / "b").string(), dir).exit_code == 0);
  for (const char* name :
       {"long.rten", "short.rten", "gt.rten", "mask.rten", "manifest.json"})
    CHECK(oracle::fnv1a64_file((dir / "a" / name).string()) ==
          oracle::fnv1a64_file((dir / "b" / name).string()));
}

TEST_CASE("missing inputs exit nonzero with an error prefix") {
  const fs::path dir = fresh_dir("synth_bad");
  const CliResult r = run_cli(
      "synthesize --raw1 /nonexistent.pgm --raw2 /nonexistent.pgm --out-dir " +
          (dir / "q").string(),
      dir);
  CHECK(r.exit_code != 0);
  CHECK(r.err.rfind("error:", 0) == 0);
}

TEST_CASE("eval reports the identity sentinels for out == gt") {
  const fs::path dir = fresh_dir("eval");
  REQUIRE(run_cli("synthesize --raw1 " + data_file("scene_a.pgm") +
                      " --raw2 " + data_file("scene_b.pgm") + " --out-dir " +
                      (dir / "q").string() + " --seed 3 --no-noise",
                  dir)
              .exit_code == 0);
  const std::string gt = (dir / "q" / "gt.rten").string();
  const CliResult r = run_cli(
      "eval --out " + gt + " --gt " + gt + " --losses --mask " +
          (dir / "q" / "mask.rten").string(),
      dir);
  REQUIRE_MESSAGE(r.exit_code == 0, r.err);
  const json report = json::parse(r.out);
  CHECK(report.at("pairs").size() == 1);
  const auto& pair = report.at("pairs").at(0);
  CHECK(pair.at("psnr").is_null());
  CHECK(pair.at("delta_e").get<double>() == 0.0);
  CHECK(pair.at("ms_ssim").get<double>() == 1.0);
  CHECK(pair.at("losses").at("l_pix").get<double>() == 0.0);
  CHECK(pair.at("losses").at("l_amss").get<double>() == 0.0);
  CHECK(report.at("mean").at("psnr").is_null());
}

TEST_CASE("init-weights, fuse, infer pipeline holds together") {
  const fs::path dir = fresh_dir("netflow");
  REQUIRE(run_cli("init-weights --seed 11 --out " + (dir / "w.json").string(),
                  dir)
              .exit_code == 0);

  // fuse prints the parameter table and writes a plain arch alongside
  const CliResult fuse = run_cli(
      "fuse --weights " + (dir / "w.json").string() + " --weights-out " +
          (dir / "wf.json").string(),
      dir);
  REQUIRE_MESSAGE(fuse.exit_code == 0, fuse.err);
  CHECK(fuse.out.find("952980") != std::string::npos);   // tcb params
  CHECK(fuse.out.find("368724") != std::string::npos);   // fused params
  CHECK(fs::exists(dir / "wf.arch.json"));

  // refusing to fuse an already-fused model
  const CliResult refuse = run_cli(
      "fuse --arch " + (dir / "wf.arch.json").string() + " --weights " +
          (dir / "wf.json").string() + " --weights-out " +
          (dir / "wff.json").string(),
      dir);
  CHECK(refuse.exit_code != 0);
  CHECK(refuse.err.find("already fused") != std::string::npos);

  // inputs for inference
  REQUIRE(run_cli("synthesize --raw1 " + data_file("scene_a.pgm") +
                      " --raw2 " + data_file("scene_b.pgm") + " --out-dir " +
                      (dir / "q").string() + " --seed 5",
                  dir)
              .exit_code == 0);
  const std::string short_in = (dir / "q" / "short.rten").string();
  const std::string long_in = (dir / "q" / "long.rten").string();

  REQUIRE(run_cli("infer --weights " + (dir / "w.json").string() + " --short " +
                      short_in + " --long " + long_in + " --out " +
                      (dir / "out_tcb.rten").string(),
                  dir)
              .exit_code == 0);
  REQUIRE(run_cli("infer --arch " + (dir / "wf.arch.json").string() +
                      " --weights " + (dir / "wf.json").string() + " --short " +
                      short_in + " --long " + long_in + " --out " +
                      (dir / "out_fused.rten").string(),
                  dir)
              .exit_code == 0);

  const rawhdr::Tensor a = rawhdr::read_rten((dir / "out_tcb.rten").string());
  const rawhdr::Tensor b = rawhdr::read_rten((dir / "out_fused.rten").string());
  REQUIRE(a.same_shape(b));
  CHECK(a.c == 4);
  CHECK(a.h == 256);
  CHECK(oracle::max_abs_diff(a.v, b.v) < 1e-4);

  // repeated inference is byte-identical
  REQUIRE(run_cli("infer --weights " + (dir / "w.json").string() + " --short " +
                      short_in + " --long " + long_in + " --out " +
                      (dir / "out_tcb2.rten").string(),
                  dir)
              .exit_code == 0);
  CHECK(oracle::fnv1a64_file((dir / "out_tcb.rten").string()) ==
        oracle::fnv1a64_file((dir / "out_tcb2.rten").string()));

  // fused manifest carries only dense conv tensors
  const json wf = json::parse(slurp(dir / "wf.json"));
  for (const auto& t : wf.at("tensors")) {
    const std::string name = t.at("name").get<std::string>();
    CHECK(name.find(".main.") == std::string::npos);
    CHECK(name.find(".expand.") == std::string::npos);
    CHECK(name.find(".sobel_") == std::string::npos);
  }
}

TEST_CASE("mask subcommand emits a spec within the documented ranges") {
  const fs::path dir = fresh_dir("mask");
  REQUIRE(run_cli("synthesize --raw1 " + data_file("scene_a.pgm") +
                      " --raw2 " + data_file("scene_b.pgm") + " --out-dir " +
                      (dir / "q").string() + " --seed 9 --no-motion",
                  dir)
              .exit_code == 0);
  const CliResult r = run_cli(
      "mask --in " + (dir / "q" / "long.rten").string() + " --out " +
          (dir / "moved.rten").string() + " --out-mask " +
          (dir / "m.rten").string() + " --out-spec " +
          (dir / "spec.json").string() + " --seed 4",
      dir);
  REQUIRE_MESSAGE(r.exit_code == 0, r.err);
  const json spec = json::parse(slurp(dir / "spec.json"));
  CHECK(spec.at("rect_w").get<int>() >= 40);
  CHECK(spec.at("rect_w").get<int>() <= 60);
  CHECK(spec.at("dx").get<int>() >= -30);
  CHECK(spec.at("dx").get<int>() <= 30);
  const rawhdr::Tensor m = rawhdr::read_rten((dir / "m.rten").string());
  CHECK(m.c == 1);
  for (float v : m.v) CHECK((v == 0.0f || v == 1.0f));
}

TEST_SUITE_END();
