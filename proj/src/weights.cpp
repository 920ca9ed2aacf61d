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

#include "rawhdr/weights.hpp"

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "rawhdr/rng.hpp"

namespace rawhdr::net {

namespace {

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

std::size_t element_count(const std::vector<int>& shape) {
  std::size_t n = 1;
  for (int d : shape) n *= static_cast<std::size_t>(d);
  return n;
}

std::vector<float> uniform_fill(std::size_t n, double lo, double hi,
                                Xoshiro256pp& rng) {
  std::vector<float> out(n);
  for (float& v : out)
    v = static_cast<float>(lo + (hi - lo) * rng.uniform());
  return out;
}

void init_tensor(WeightStore& store, const std::string& name,
                 std::vector<int> shape, double bound, std::uint64_t seed) {
  Xoshiro256pp rng(derive_seed(seed, fnv1a64(name)));
  store.put(name, shape, uniform_fill(element_count(shape), -bound, bound, rng));
}

}  // namespace

const TensorEntry& WeightStore::get(const std::string& name) const {
  const auto it = tensors.find(name);
  if (it == tensors.end()) throw ValidationError("missing weight tensor: " + name);
  return it->second;
}

void WeightStore::put(const std::string& name, std::vector<int> shape,
                      std::vector<float> data) {
  if (element_count(shape) != data.size())
    throw ValidationError("weight tensor shape/data mismatch: " + name);
  tensors[name] = TensorEntry{std::move(shape), std::move(data)};
}

void save_weights(const std::string& manifest_path, const WeightStore& store) {
  const std::filesystem::path mpath(manifest_path);
  std::filesystem::path blob = mpath;
  blob.replace_extension(".bin");

  nlohmann::json j;
  j["format"] = "rawhdr-weights";
  j["version"] = 1;
  j["blob"] = blob.filename().string();
  auto entries = nlohmann::json::array();
  std::uint64_t offset = 0;
  std::ofstream bout(blob, std::ios::binary);
  if (!bout) throw IoError("cannot open for writing: " + blob.string());
  for (const auto& [name, tensor] : store.tensors) {
    nlohmann::json e;
    e["name"] = name;
    e["shape"] = tensor.shape;
    e["dtype"] = "f32";
    e["byte_offset"] = offset;
    entries.push_back(std::move(e));
    bout.write(reinterpret_cast<const char*>(tensor.data.data()),
               static_cast<std::streamsize>(tensor.data.size() * 4));
    offset += tensor.data.size() * 4;
  }
  j["tensors"] = std::move(entries);
  if (!bout) throw IoError("short write: " + blob.string());

  std::ofstream mout(mpath);
  if (!mout) throw IoError("cannot open for writing: " + manifest_path);
  mout << j.dump(2) << "\n";
}

WeightStore load_weights(const std::string& manifest_path) {
  std::ifstream min(manifest_path);
  if (!min) throw IoError("cannot open: " + manifest_path);
  nlohmann::json j;
  WeightStore store;
  try {
    min >> j;
    if (j.at("format").get<std::string>() != "rawhdr-weights")
      throw IoError("not a weight manifest: " + manifest_path);
    const std::filesystem::path blob =
        std::filesystem::path(manifest_path).parent_path() /
        j.at("blob").get<std::string>();
    std::ifstream bin(blob, std::ios::binary);
    if (!bin) throw IoError("cannot open weight blob: " + blob.string());
    for (const auto& e : j.at("tensors")) {
      const auto name = e.at("name").get<std::string>();
      const auto shape = e.at("shape").get<std::vector<int>>();
      if (e.at("dtype").get<std::string>() != "f32")
        throw IoError("unsupported dtype for tensor " + name);
      const auto offset = e.at("byte_offset").get<std::uint64_t>();
      std::vector<float> data(element_count(shape));
      bin.seekg(static_cast<std::streamoff>(offset));
      if (!bin.read(reinterpret_cast<char*>(data.data()),
                    static_cast<std::streamsize>(data.size() * 4)))
        throw IoError("truncated weight blob reading " + name);
      store.put(name, shape, std::move(data));
    }
  } catch (const nlohmann::json::exception& e) {
    throw IoError("bad weight manifest " + manifest_path + ": " + e.what());
  }
  return store;
}

WeightStore init_random_weights(const ModelGraph& g, std::uint64_t seed) {
  validate(g);
  WeightStore store;
  for (const Node& n : g.nodes) {
    if (n.kind == NodeKind::kConv3x3) {
      const double bound = 1.0 / std::sqrt(9.0 * n.c_in);
      init_tensor(store, n.name + ".w", {n.c_out, n.c_in, 3, 3}, bound, seed);
      init_tensor(store, n.name + ".b", {n.c_out}, 0.1, seed);
    } else if (n.kind == NodeKind::kTcb) {
      const double b3 = 1.0 / std::sqrt(9.0 * n.c_in);
      const double b1 = 1.0 / std::sqrt(1.0 * n.c_in);
      const double bsq = 1.0 / std::sqrt(9.0 * n.c_mid);
      init_tensor(store, n.name + ".main.w", {n.c_out, n.c_in, 3, 3}, b3, seed);
      init_tensor(store, n.name + ".main.b", {n.c_out}, 0.1, seed);
      init_tensor(store, n.name + ".expand.w", {n.c_mid, n.c_in}, b1, seed);
      init_tensor(store, n.name + ".expand.b", {n.c_mid}, 0.1, seed);
      init_tensor(store, n.name + ".squeeze.w", {n.c_out, n.c_mid, 3, 3}, bsq,
                  seed);
      init_tensor(store, n.name + ".squeeze.b", {n.c_out}, 0.1, seed);
      init_tensor(store, n.name + ".sobel_pre.w", {n.c_out, n.c_in}, b1, seed);
      init_tensor(store, n.name + ".sobel_pre.b", {n.c_out}, 0.1, seed);
      init_tensor(store, n.name + ".sobel_scale_x", {n.c_out}, 0.5, seed);
      init_tensor(store, n.name + ".sobel_scale_y", {n.c_out}, 0.5, seed);
      if (n.variant == TcbVariant::kDecoder) {
        init_tensor(store, n.name + ".lap_pre.w", {n.c_out, n.c_in}, b1, seed);
        init_tensor(store, n.name + ".lap_pre.b", {n.c_out}, 0.1, seed);
        init_tensor(store, n.name + ".lap_scale", {n.c_out}, 0.5, seed);
      }
      init_tensor(store, n.name + ".pw.w", {n.c_out, n.c_in}, b1, seed);
      init_tensor(store, n.name + ".pw.b", {n.c_out}, 0.1, seed);
    }
  }
  return store;
}

TcbParams load_tcb(const WeightStore& store, const Node& node) {
  if (node.kind != NodeKind::kTcb)
    throw ValidationError("node is not a tcb: " + node.name);
  TcbParams p = make_tcb<float>(node.c_out, node.c_in, node.variant,
                                node.use_identity,
                                node.c_mid / std::max(node.c_out, 1));
  p.c_mid = node.c_mid;
  p.main3x3.w = store.get(node.name + ".main.w").data;
  p.main3x3.b = store.get(node.name + ".main.b").data;
  p.expand_w = store.get(node.name + ".expand.w").data;
  p.expand_b = store.get(node.name + ".expand.b").data;
  p.squeeze3x3.w = store.get(node.name + ".squeeze.w").data;
  p.squeeze3x3.b = store.get(node.name + ".squeeze.b").data;
  p.sobel_pre_w = store.get(node.name + ".sobel_pre.w").data;
  p.sobel_pre_b = store.get(node.name + ".sobel_pre.b").data;
  p.sobel_scale_x = store.get(node.name + ".sobel_scale_x").data;
  p.sobel_scale_y = store.get(node.name + ".sobel_scale_y").data;
  if (node.variant == TcbVariant::kDecoder) {
    p.lap_pre_w = store.get(node.name + ".lap_pre.w").data;
    p.lap_pre_b = store.get(node.name + ".lap_pre.b").data;
    p.lap_scale = store.get(node.name + ".lap_scale").data;
  }
  p.conv1x1_w = store.get(node.name + ".pw.w").data;
  p.conv1x1_b = store.get(node.name + ".pw.b").data;
  validate(p);
  return p;
}

void store_conv(WeightStore& store, const std::string& name,
                const Conv3x3& conv) {
  store.put(name + ".w", {conv.c_out, conv.c_in, 3, 3}, conv.w);
  store.put(name + ".b", {conv.c_out}, conv.b);
}

WeightStore fuse_weights(const ModelGraph& g, const WeightStore& store) {
  validate(g);
  WeightStore fused;
  for (const Node& n : g.nodes) {
    if (n.kind == NodeKind::kTcb) {
      store_conv(fused, n.name, tcb_fuse(load_tcb(store, n)));
    } else if (n.kind == NodeKind::kConv3x3) {
      fused.put(n.name + ".w", store.get(n.name + ".w").shape,
                store.get(n.name + ".w").data);
      fused.put(n.name + ".b", store.get(n.name + ".b").shape,
                store.get(n.name + ".b").data);
    }
  }
  return fused;
}

bool has_tcb_tensors(const WeightStore& store) {
  for (const auto& [name, tensor] : store.tensors)
    if (name.find(".main.") != std::string::npos ||
        name.find(".expand.") != std::string::npos ||
        name.find(".squeeze.") != std::string::npos ||
        name.find(".sobel_") != std::string::npos ||
        name.find(".lap_") != std::string::npos ||
        name.find(".pw.") != std::string::npos)
      return true;
  return false;
}

}  // namespace rawhdr::net
