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

#include "rawhdr/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include <json.hpp>

#include "rawhdr/ops.hpp"
#include "rawhdr/rng.hpp"

namespace rawhdr::engine {

namespace {

void check_finite(const Tensor& t, const std::string& name) {
  for (float v : t.v)
    if (!std::isfinite(v))
      throw ValidationError("non-finite value after node " + name);
}

ops::ConvWeights conv_from_store(const net::WeightStore& store,
                                 const net::Node& n) {
  ops::ConvWeights k;
  k.c_out = n.c_out;
  k.c_in = n.c_in;
  k.w = store.get(n.name + ".w").data;
  k.b = store.get(n.name + ".b").data;
  return k;
}

double median(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  return n % 2 == 1 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

Tensor random_input(int h, int w, std::uint64_t seed) {
  Tensor t(4, h, w);
  Xoshiro256pp rng(seed);
  for (float& v : t.v) v = static_cast<float>(rng.uniform());
  return t;
}

}  // namespace

Tensor forward(const net::ModelGraph& g, const net::WeightStore& weights,
               const Tensor& short_in, const Tensor& long_in) {
  net::validate(g);
  if (short_in.c != 4 || long_in.c != 4)
    throw DimensionError("inputs must be packed [4, H, W] tensors");
  if (!short_in.same_shape(long_in))
    throw DimensionError("short and long inputs differ in shape");
  const int div = 1 << (g.cfg.scales + 1);
  if (short_in.h % div != 0 || short_in.w % div != 0)
    throw DimensionError("input dims must be divisible by 2^(scales+1)");

  std::vector<Tensor> values(g.nodes.size());
  for (const net::Node& n : g.nodes) {
    const auto idx = static_cast<std::size_t>(n.id);
    switch (n.kind) {
      case net::NodeKind::kInput:
        values[idx] = n.id == g.input_short_id ? short_in : long_in;
        break;
      case net::NodeKind::kOutput:
        values[idx] = values[static_cast<std::size_t>(n.inputs[0])];
        break;
      case net::NodeKind::kConv3x3:
        values[idx] = ops::conv2d_3x3(
            values[static_cast<std::size_t>(n.inputs[0])],
            conv_from_store(weights, n));
        break;
      case net::NodeKind::kTcb:
        values[idx] = net::tcb_forward(
            net::load_tcb(weights, n),
            values[static_cast<std::size_t>(n.inputs[0])]);
        break;
      case net::NodeKind::kRelu:
        values[idx] = ops::relu(values[static_cast<std::size_t>(n.inputs[0])]);
        break;
      case net::NodeKind::kPixelUnshuffle2:
        values[idx] =
            ops::pixel_unshuffle2(values[static_cast<std::size_t>(n.inputs[0])]);
        break;
      case net::NodeKind::kPixelShuffle2:
        values[idx] =
            ops::pixel_shuffle2(values[static_cast<std::size_t>(n.inputs[0])]);
        break;
      case net::NodeKind::kConcat: {
        std::vector<const Tensor*> xs;
        xs.reserve(n.inputs.size());
        for (int in : n.inputs)
          xs.push_back(&values[static_cast<std::size_t>(in)]);
        values[idx] = ops::concat(xs);
        break;
      }
      case net::NodeKind::kAdd:
        values[idx] = ops::add(values[static_cast<std::size_t>(n.inputs[0])],
                               values[static_cast<std::size_t>(n.inputs[1])]);
        break;
    }
    if (n.kind != net::NodeKind::kInput && n.kind != net::NodeKind::kOutput)
      check_finite(values[idx], n.name);
  }
  return values[static_cast<std::size_t>(g.output_id)];
}

BenchReport benchmark(const net::ModelGraph& g_multibranch,
                      const net::WeightStore& w_multibranch,
                      const net::ModelGraph& g_fused,
                      const net::WeightStore& w_fused, int input_h,
                      int input_w, int repeats, int warmup,
                      std::uint64_t input_seed) {
  if (repeats < 1) throw ParameterError("benchmark repeats must be >= 1");
  if (warmup < 0) throw ParameterError("benchmark warmup must be >= 0");
  BenchReport report;
  report.input_h = input_h;
  report.input_w = input_w;
  report.repeats = repeats;
  report.warmup = warmup;

  const Tensor short_in = random_input(input_h, input_w, derive_seed(input_seed, 10));
  const Tensor long_in = random_input(input_h, input_w, derive_seed(input_seed, 11));

  auto time_one = [&](const net::ModelGraph& g, const net::WeightStore& w) {
    const auto start = std::chrono::steady_clock::now();
    const Tensor out = forward(g, w, short_in, long_in);
    const auto stop = std::chrono::steady_clock::now();
    (void)out;
    return std::chrono::duration<double, std::milli>(stop - start).count();
  };

  for (int i = 0; i < warmup; ++i) {
    time_one(g_multibranch, w_multibranch);
    time_one(g_fused, w_fused);
  }
  for (int i = 0; i < repeats; ++i) {
    report.multibranch_ms.push_back(time_one(g_multibranch, w_multibranch));
    report.fused_ms.push_back(time_one(g_fused, w_fused));
  }
  report.median_multibranch_ms = median(report.multibranch_ms);
  report.median_fused_ms = median(report.fused_ms);
  report.speedup = report.median_multibranch_ms / report.median_fused_ms;
  return report;
}

std::string bench_report_to_json(const BenchReport& r) {
  nlohmann::json j;
  j["input"] = {r.input_c, r.input_h, r.input_w};
  j["repeats"] = r.repeats;
  j["warmup"] = r.warmup;
  j["multibranch_ms"] = r.multibranch_ms;
  j["fused_ms"] = r.fused_ms;
  j["median_multibranch_ms"] = r.median_multibranch_ms;
  j["median_fused_ms"] = r.median_fused_ms;
  j["speedup"] = r.speedup;
  return j.dump(2);
}

BenchReport bench_report_from_json(const std::string& json_text) {
  BenchReport r;
  try {
    const auto j = nlohmann::json::parse(json_text);
    r.input_c = j.at("input").at(0).get<int>();
    r.input_h = j.at("input").at(1).get<int>();
    r.input_w = j.at("input").at(2).get<int>();
    r.repeats = j.at("repeats").get<int>();
    r.warmup = j.at("warmup").get<int>();
    r.multibranch_ms = j.at("multibranch_ms").get<std::vector<double>>();
    r.fused_ms = j.at("fused_ms").get<std::vector<double>>();
    r.median_multibranch_ms = j.at("median_multibranch_ms").get<double>();
    r.median_fused_ms = j.at("median_fused_ms").get<double>();
    r.speedup = j.at("speedup").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("bad benchmark report: ") + e.what());
  }
  return r;
}

}  // namespace rawhdr::engine
