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

#ifndef RAWHDR_WEIGHTS_HPP_
#define RAWHDR_WEIGHTS_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rawhdr/graph.hpp"

namespace rawhdr::net {

// Named parameter tensors for one model. Keys follow the node names:
//   plain conv "X" : X.w [co,ci,3,3], X.b [co]
//   tcb "X"        : X.main.{w,b}, X.expand.{w,b}, X.squeeze.{w,b},
//                    X.sobel_pre.{w,b}, X.sobel_scale_{x,y},
//                    X.lap_pre.{w,b}, X.lap_scale (decoder variant only),
//                    X.pw.{w,b}
struct TensorEntry {
  std::vector<int> shape;
  std::vector<float> data;
};

struct WeightStore {
  std::map<std::string, TensorEntry> tensors;

  const TensorEntry& get(const std::string& name) const;
  void put(const std::string& name, std::vector<int> shape,
           std::vector<float> data);
  bool has(const std::string& name) const {
    return tensors.find(name) != tensors.end();
  }
};

// Manifest file: JSON header naming every tensor with {name, shape, dtype,
// byte_offset} plus the blob filename, alongside a single little-endian
// binary32 blob. Tensors are laid out in name order, so save/load is a
// fixed point. The blob path inside the manifest is relative to the
// manifest's directory; by default it is "<manifest stem>.bin".
void save_weights(const std::string& manifest_path, const WeightStore& store);
WeightStore load_weights(const std::string& manifest_path);

// Deterministic random parameters for a graph: every tensor gets its own
// substream keyed by derive_seed(seed, fnv1a64(tensor name)). Convolution
// weights draw from U(-1/sqrt(fan_in), 1/sqrt(fan_in)); biases from
// U(-0.1, 0.1); derivative-branch scales from U(-0.5, 0.5).
WeightStore init_random_weights(const ModelGraph& g, std::uint64_t seed);

// Typed views into the store for one node.
TcbParams load_tcb(const WeightStore& store, const Node& node);
void store_conv(WeightStore& store, const std::string& name,
                const Conv3x3& conv);

// Fuses every tcb node's parameters into dense conv tensors for the
// fuse_model graph; plain tensors are carried over unchanged.
WeightStore fuse_weights(const ModelGraph& g, const WeightStore& store);

// True if any tensor name carries a tcb branch suffix.
bool has_tcb_tensors(const WeightStore& store);

}  // namespace rawhdr::net

#endif  // RAWHDR_WEIGHTS_HPP_
