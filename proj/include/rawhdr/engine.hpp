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

#ifndef RAWHDR_ENGINE_HPP_
#define RAWHDR_ENGINE_HPP_

#include <string>
#include <vector>

#include "rawhdr/weights.hpp"

namespace rawhdr::engine {

// Executes the graph topologically on the CPU. Inputs are the packed
// [4, H, W] exposures with H, W divisible by 2^(scales+1). Deterministic
// for fixed inputs; throws on missing weights, shape mismatches, or a
// non-finite intermediate.
Tensor forward(const net::ModelGraph& g, const net::WeightStore& weights,
               const Tensor& short_in, const Tensor& long_in);

// Wall-clock comparison of a multi-branch graph against its fused twin on
// synthetic inputs of the given packed-plane size. Median of `repeats`
// timed runs after `warmup` untimed ones.
struct BenchReport {
  int input_c = 4;
  int input_h = 0;
  int input_w = 0;
  int repeats = 0;
  int warmup = 0;
  std::vector<double> multibranch_ms;
  std::vector<double> fused_ms;
  double median_multibranch_ms = 0.0;
  double median_fused_ms = 0.0;
  double speedup = 0.0;  // multibranch / fused
};

BenchReport benchmark(const net::ModelGraph& g_multibranch,
                      const net::WeightStore& w_multibranch,
                      const net::ModelGraph& g_fused,
                      const net::WeightStore& w_fused, int input_h,
                      int input_w, int repeats, int warmup = 2,
                      std::uint64_t input_seed = 0);

std::string bench_report_to_json(const BenchReport& r);
BenchReport bench_report_from_json(const std::string& json_text);

}  // namespace rawhdr::engine

#endif  // RAWHDR_ENGINE_HPP_
