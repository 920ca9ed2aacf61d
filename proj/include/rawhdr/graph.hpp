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

#ifndef RAWHDR_GRAPH_HPP_
#define RAWHDR_GRAPH_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "rawhdr/tcb.hpp"

namespace rawhdr::net {

enum class NodeKind {
  kInput,
  kOutput,
  kConv3x3,
  kTcb,
  kRelu,
  kPixelUnshuffle2,
  kPixelShuffle2,
  kConcat,
  kAdd,
};

std::string to_string(NodeKind kind);

enum class Stage { kStem, kEncoder, kFusion, kDecoder, kHead };

struct Node {
  int id = -1;
  NodeKind kind = NodeKind::kInput;
  Stage stage = Stage::kStem;
  std::string name;        // parameter prefix for conv/tcb nodes
  std::vector<int> inputs; // producer node ids, topologically earlier
  int c_in = 0;            // conv/tcb only
  int c_out = 0;           // channels produced
  // tcb only:
  int c_mid = 0;
  TcbVariant variant = TcbVariant::kEncoder;
  bool use_identity = false;
};

// Dual-encoder UNet configuration. The short exposure is the reference
// stream; the long exposure contributes complementary features fused into
// the decoder at every scale.
struct ArchConfig {
  int scales = 3;
  std::vector<int> widths = {16, 32, 64};  // per-scale feature widths
  std::string fusion = "concat";           // "concat" (with mixing conv) or "add"
  std::string block = "tcb";               // "tcb" or "plain"
  int expand_ratio = 2;                    // mid channels = ratio * c_out
};

void validate(const ArchConfig& cfg);
ArchConfig arch_config_from_json(const std::string& json_text);
std::string arch_config_to_json(const ArchConfig& cfg);

// Layer DAG in topological order (node id == index). Exactly one output,
// fed by a plain dense 3x3 convolution.
struct ModelGraph {
  ArchConfig cfg;
  std::vector<Node> nodes;
  int input_short_id = -1;
  int input_long_id = -1;
  int output_id = -1;

  bool has_tcb() const;
  std::size_t edge_count() const;
};

void validate(const ModelGraph& g);

// Builds the dual-encoder UNet:
//   stem      : pixel-unshuffle both packed inputs
//   encoder   : per scale, short path [down, conv, relu] and long path
//               [down, conv, relu, conv, relu]
//   fusion    : per scale, concat + mixing conv + relu (or plain add)
//   decoder   : per level, pixel-shuffle up, concat skip, conv, relu
//   head      : pixel-shuffle to full resolution + plain 3x3 conv to 4ch
// With block == "tcb" every convolution except the final one becomes a TCB;
// encoder-side blocks (including fusion mixers) are encoder-variant, decoder
// blocks carry the Laplacian branch, and the identity branch is enabled
// wherever input and output widths match.
ModelGraph build_dualunet(const ArchConfig& cfg);

// Replaces every tcb node by an equivalent dense conv3x3 node; topology is
// otherwise unchanged. Weight conversion is handled by the weight store
// layer (see fuse_weights).
ModelGraph fuse_model(const ModelGraph& g);

// Parameter and FLOP tally. FLOPs use the multiply-accumulate = 2 FLOPs
// convention, counting convolution arithmetic only (activation, shuffle and
// branch-sum traffic is not billed):
//   dense kxk : 2 * k^2 * c_in * c_out * H * W
//   depthwise : 2 * k^2 * c    * H * W
struct NodeCost {
  std::string name;
  NodeKind kind = NodeKind::kInput;
  std::uint64_t params = 0;
  std::uint64_t flops = 0;
};

struct GraphCost {
  std::uint64_t params = 0;
  std::uint64_t flops = 0;
  std::vector<NodeCost> per_node;
};

// input_h/input_w are the packed-plane dims of the [4, H, W] inputs.
GraphCost count_params_flops(const ModelGraph& g, int input_h, int input_w);

}  // namespace rawhdr::net

#endif  // RAWHDR_GRAPH_HPP_
