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

#include "rawhdr/graph.hpp"

#include <algorithm>

#include <json.hpp>

namespace rawhdr::net {

std::string to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::kInput: return "input";
    case NodeKind::kOutput: return "output";
    case NodeKind::kConv3x3: return "conv3x3";
    case NodeKind::kTcb: return "tcb";
    case NodeKind::kRelu: return "relu";
    case NodeKind::kPixelUnshuffle2: return "pixel_unshuffle2";
    case NodeKind::kPixelShuffle2: return "pixel_shuffle2";
    case NodeKind::kConcat: return "concat";
    case NodeKind::kAdd: return "add";
  }
  return "?";
}

void validate(const ArchConfig& cfg) {
  if (cfg.scales < 1 || cfg.scales > 6)
    throw ValidationError("arch scales must be in [1, 6]");
  if (static_cast<int>(cfg.widths.size()) != cfg.scales)
    throw ValidationError("arch widths must list one entry per scale");
  for (int w : cfg.widths)
    if (w < 4 || w % 4 != 0)
      throw ValidationError("arch widths must be positive multiples of 4");
  if (cfg.fusion != "concat" && cfg.fusion != "add")
    throw ValidationError("arch fusion must be 'concat' or 'add'");
  if (cfg.block != "tcb" && cfg.block != "plain")
    throw ValidationError("arch block must be 'tcb' or 'plain'");
  if (cfg.expand_ratio < 1)
    throw ValidationError("arch expand ratio must be >= 1");
}

ArchConfig arch_config_from_json(const std::string& json_text) {
  ArchConfig cfg;
  try {
    const auto j = nlohmann::json::parse(json_text);
    cfg.scales = j.value("scales", cfg.scales);
    if (j.contains("widths")) cfg.widths = j.at("widths").get<std::vector<int>>();
    cfg.fusion = j.value("fusion", cfg.fusion);
    cfg.block = j.value("block", cfg.block);
    cfg.expand_ratio = j.value("expand_ratio", cfg.expand_ratio);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("bad arch config: ") + e.what());
  }
  validate(cfg);
  return cfg;
}

std::string arch_config_to_json(const ArchConfig& cfg) {
  nlohmann::json j;
  j["scales"] = cfg.scales;
  j["widths"] = cfg.widths;
  j["fusion"] = cfg.fusion;
  j["block"] = cfg.block;
  j["expand_ratio"] = cfg.expand_ratio;
  return j.dump(2);
}

bool ModelGraph::has_tcb() const {
  return std::any_of(nodes.begin(), nodes.end(), [](const Node& n) {
    return n.kind == NodeKind::kTcb;
  });
}

std::size_t ModelGraph::edge_count() const {
  std::size_t edges = 0;
  for (const Node& n : nodes) edges += n.inputs.size();
  return edges;
}

void validate(const ModelGraph& g) {
  validate(g.cfg);
  int outputs = 0;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const Node& n = g.nodes[i];
    if (n.id != static_cast<int>(i))
      throw ValidationError("graph node ids must be topological indices");
    for (int in : n.inputs)
      if (in < 0 || in >= n.id)
        throw ValidationError("graph edges must point to earlier nodes");
    switch (n.kind) {
      case NodeKind::kInput:
        if (!n.inputs.empty()) throw ValidationError("input node with inputs");
        break;
      case NodeKind::kOutput:
        outputs++;
        if (n.inputs.size() != 1)
          throw ValidationError("output node needs exactly one input");
        if (g.nodes[static_cast<std::size_t>(n.inputs[0])].kind !=
            NodeKind::kConv3x3)
          throw ValidationError("the last layer must be a plain conv3x3");
        break;
      case NodeKind::kConv3x3:
      case NodeKind::kTcb: {
        if (n.inputs.size() != 1)
          throw ValidationError("conv nodes need exactly one input");
        const Node& src = g.nodes[static_cast<std::size_t>(n.inputs[0])];
        if (src.c_out != n.c_in)
          throw ValidationError("channel mismatch into " + n.name);
        if (n.kind == NodeKind::kTcb && n.use_identity && n.c_in != n.c_out)
          throw ValidationError("identity branch on shape-changing tcb");
        if (n.kind == NodeKind::kTcb &&
            (n.variant == TcbVariant::kDecoder) != (n.stage == Stage::kDecoder))
          throw ValidationError("tcb variant must match its stage");
        break;
      }
      case NodeKind::kRelu:
      case NodeKind::kPixelUnshuffle2:
      case NodeKind::kPixelShuffle2:
        if (n.inputs.size() != 1)
          throw ValidationError("unary node needs exactly one input");
        break;
      case NodeKind::kConcat:
        if (n.inputs.size() < 2)
          throw ValidationError("concat needs at least two inputs");
        break;
      case NodeKind::kAdd:
        if (n.inputs.size() != 2)
          throw ValidationError("add needs exactly two inputs");
        break;
    }
  }
  if (outputs != 1) throw ValidationError("graph must have exactly one output");
}

namespace {

class Builder {
 public:
  explicit Builder(const ArchConfig& cfg) { g_.cfg = cfg; }

  int input(const std::string& name, int c) {
    return push(NodeKind::kInput, Stage::kStem, name, {}, 0, c);
  }
  int unshuffle(Stage stage, const std::string& name, int src) {
    return push(NodeKind::kPixelUnshuffle2, stage, name, {src}, 0,
                channels(src) * 4);
  }
  int shuffle(Stage stage, const std::string& name, int src) {
    return push(NodeKind::kPixelShuffle2, stage, name, {src}, 0,
                channels(src) / 4);
  }
  int relu(Stage stage, const std::string& name, int src) {
    return push(NodeKind::kRelu, stage, name, {src}, 0, channels(src));
  }
  int concat(Stage stage, const std::string& name, std::vector<int> srcs) {
    int c = 0;
    for (int s : srcs) c += channels(s);
    return push(NodeKind::kConcat, stage, name, std::move(srcs), 0, c);
  }
  int add(Stage stage, const std::string& name, int a, int b) {
    return push(NodeKind::kAdd, stage, name, {a, b}, 0, channels(a));
  }

  // Plain conv or TCB, depending on the configured block kind. The final
  // head convolution stays plain regardless.
  int conv(Stage stage, const std::string& name, int src, int c_out,
           bool force_plain = false) {
    const int c_in = channels(src);
    if (g_.cfg.block == "plain" || force_plain)
      return push(NodeKind::kConv3x3, stage, name, {src}, c_in, c_out);
    const int id = push(NodeKind::kTcb, stage, name, {src}, c_in, c_out);
    Node& n = g_.nodes[static_cast<std::size_t>(id)];
    n.c_mid = g_.cfg.expand_ratio * c_out;
    n.variant = stage == Stage::kDecoder ? TcbVariant::kDecoder
                                         : TcbVariant::kEncoder;
    n.use_identity = c_in == c_out;
    return id;
  }

  int output(int src) {
    return push(NodeKind::kOutput, Stage::kHead, "out", {src}, 0,
                channels(src));
  }

  int channels(int id) const {
    return g_.nodes[static_cast<std::size_t>(id)].c_out;
  }
  ModelGraph take() { return std::move(g_); }

 private:
  int push(NodeKind kind, Stage stage, const std::string& name,
           std::vector<int> inputs, int c_in, int c_out) {
    Node n;
    n.id = static_cast<int>(g_.nodes.size());
    n.kind = kind;
    n.stage = stage;
    n.name = name;
    n.inputs = std::move(inputs);
    n.c_in = c_in;
    n.c_out = c_out;
    g_.nodes.push_back(std::move(n));
    return g_.nodes.back().id;
  }

  ModelGraph g_;
};

}  // namespace

ModelGraph build_dualunet(const ArchConfig& cfg) {
  validate(cfg);
  Builder b(cfg);

  const int in_s = b.input("in_short", 4);
  const int in_l = b.input("in_long", 4);
  const int stem_s = b.unshuffle(Stage::kStem, "stem_s.down", in_s);
  const int stem_l = b.unshuffle(Stage::kStem, "stem_l.down", in_l);

  std::vector<int> fused;  // per-scale fused features, decoder skips
  int s = stem_s;
  int l = stem_l;
  for (int i = 0; i < cfg.scales; ++i) {
    const std::string tag = std::to_string(i + 1);
    const int width = cfg.widths[static_cast<std::size_t>(i)];
    s = b.unshuffle(Stage::kEncoder, "enc" + tag + "_s.down", s);
    s = b.conv(Stage::kEncoder, "enc" + tag + "_s.conv1", s, width);
    s = b.relu(Stage::kEncoder, "enc" + tag + "_s.relu1", s);
    l = b.unshuffle(Stage::kEncoder, "enc" + tag + "_l.down", l);
    l = b.conv(Stage::kEncoder, "enc" + tag + "_l.conv1", l, width);
    l = b.relu(Stage::kEncoder, "enc" + tag + "_l.relu1", l);
    l = b.conv(Stage::kEncoder, "enc" + tag + "_l.conv2", l, width);
    l = b.relu(Stage::kEncoder, "enc" + tag + "_l.relu2", l);

    int f;
    if (cfg.fusion == "concat") {
      f = b.concat(Stage::kFusion, "fuse" + tag + ".cat", {s, l});
      f = b.conv(Stage::kFusion, "fuse" + tag + ".conv", f, width);
      f = b.relu(Stage::kFusion, "fuse" + tag + ".relu", f);
    } else {
      f = b.add(Stage::kFusion, "fuse" + tag + ".add", s, l);
    }
    fused.push_back(f);
  }

  int d = fused.back();
  for (int i = cfg.scales - 1; i >= 1; --i) {
    const std::string tag = std::to_string(i);
    d = b.shuffle(Stage::kDecoder, "dec" + tag + ".up", d);
    d = b.concat(Stage::kDecoder, "dec" + tag + ".cat",
                 {d, fused[static_cast<std::size_t>(i - 1)]});
    d = b.conv(Stage::kDecoder, "dec" + tag + ".conv", d,
               cfg.widths[static_cast<std::size_t>(i - 1)]);
    d = b.relu(Stage::kDecoder, "dec" + tag + ".relu", d);
  }
  d = b.shuffle(Stage::kDecoder, "dec0.up", d);
  d = b.concat(Stage::kDecoder, "dec0.cat", {d, stem_s});
  d = b.conv(Stage::kDecoder, "dec0.conv", d, cfg.widths[0]);
  d = b.relu(Stage::kDecoder, "dec0.relu", d);

  d = b.shuffle(Stage::kHead, "head.up", d);
  d = b.conv(Stage::kHead, "head.conv", d, 4, /*force_plain=*/true);
  b.output(d);

  ModelGraph g = b.take();
  g.input_short_id = in_s;
  g.input_long_id = in_l;
  g.output_id = static_cast<int>(g.nodes.size()) - 1;
  validate(g);
  return g;
}

ModelGraph fuse_model(const ModelGraph& g) {
  validate(g);
  ModelGraph fused = g;
  for (Node& n : fused.nodes) {
    if (n.kind != NodeKind::kTcb) continue;
    n.kind = NodeKind::kConv3x3;
    n.c_mid = 0;
    n.use_identity = false;
    n.variant = TcbVariant::kEncoder;
  }
  validate(fused);
  return fused;
}

GraphCost count_params_flops(const ModelGraph& g, int input_h, int input_w) {
  validate(g);
  if (input_h <= 0 || input_w <= 0)
    throw DimensionError("input dims must be positive");
  GraphCost cost;
  std::vector<int> hs(g.nodes.size(), 0), ws(g.nodes.size(), 0);
  for (const Node& n : g.nodes) {
    const auto idx = static_cast<std::size_t>(n.id);
    switch (n.kind) {
      case NodeKind::kInput:
        hs[idx] = input_h;
        ws[idx] = input_w;
        break;
      case NodeKind::kPixelUnshuffle2:
        hs[idx] = hs[static_cast<std::size_t>(n.inputs[0])] / 2;
        ws[idx] = ws[static_cast<std::size_t>(n.inputs[0])] / 2;
        break;
      case NodeKind::kPixelShuffle2:
        hs[idx] = hs[static_cast<std::size_t>(n.inputs[0])] * 2;
        ws[idx] = ws[static_cast<std::size_t>(n.inputs[0])] * 2;
        break;
      default:
        hs[idx] = hs[static_cast<std::size_t>(n.inputs[0])];
        ws[idx] = ws[static_cast<std::size_t>(n.inputs[0])];
        break;
    }

    NodeCost nc;
    nc.name = n.name;
    nc.kind = n.kind;
    const auto hw = static_cast<std::uint64_t>(hs[idx]) * ws[idx];
    const auto ci = static_cast<std::uint64_t>(n.c_in);
    const auto co = static_cast<std::uint64_t>(n.c_out);
    if (n.kind == NodeKind::kConv3x3) {
      nc.params = 9 * ci * co + co;
      nc.flops = 2 * 9 * ci * co * hw;
    } else if (n.kind == NodeKind::kTcb) {
      const auto cm = static_cast<std::uint64_t>(n.c_mid);
      const bool decoder = n.variant == TcbVariant::kDecoder;
      nc.params = 9 * ci * co + co;        // main
      nc.params += cm * ci + cm;           // expand
      nc.params += 9 * cm * co + co;       // squeeze
      nc.params += ci * co + co + 2 * co;  // sobel pre + two scales
      if (decoder) nc.params += ci * co + co + co;
      nc.params += ci * co + co;           // pointwise
      nc.flops = 2 * 9 * ci * co * hw;     // main
      nc.flops += 2 * ci * cm * hw;        // expand
      nc.flops += 2 * 9 * cm * co * hw;    // squeeze
      nc.flops += 2 * ci * co * hw + 2 * (2 * 9 * co * hw);  // sobel path
      if (decoder) nc.flops += 2 * ci * co * hw + 2 * 9 * co * hw;
      nc.flops += 2 * ci * co * hw;        // pointwise
    }
    cost.params += nc.params;
    cost.flops += nc.flops;
    cost.per_node.push_back(std::move(nc));
  }
  return cost;
}

}  // namespace rawhdr::net
