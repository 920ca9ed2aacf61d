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

#ifndef RAWHDR_BAYER_HPP_
#define RAWHDR_BAYER_HPP_

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "rawhdr/color.hpp"
#include "rawhdr/errors.hpp"
#include "rawhdr/tensor.hpp"

namespace rawhdr {

enum class BayerPattern { kRGGB, kBGGR, kGRBG, kGBRG };

BayerPattern bayer_pattern_from_string(const std::string& s);
std::string to_string(BayerPattern p);

// Single-channel mosaic straight off the sensor: integer digital numbers,
// one color sample per pixel following the 2x2 CFA pattern.
struct BayerImage {
  std::vector<std::uint16_t> data;  // row-major, h*w samples
  int width = 0;
  int height = 0;
  BayerPattern pattern = BayerPattern::kRGGB;
  std::uint16_t black_level = 0;
  std::uint16_t white_level = 65535;
  int bit_depth = 16;

  std::uint16_t at(int y, int x) const {
    return data[static_cast<std::size_t>(y) * width + x];
  }
  std::uint16_t& at(int y, int x) {
    return data[static_cast<std::size_t>(y) * width + x];
  }
};

// Throws unless: sides even and positive, black < white, every sample within
// the declared bit depth.
void validate(const BayerImage& raw);

// Mosaic split into four half-resolution planes in canonical [R, G1, G2, B]
// order (G1 = first green in row-major cell order). exposure_scale records
// the gain currently applied relative to the scene-linear short-exposure
// domain; 1.0 for freshly packed or normalized data.
struct PackedRaw {
  int h = 0;  // plane height = mosaic height / 2
  int w = 0;  // plane width = mosaic width / 2
  std::array<std::vector<double>, 4> ch;
  double exposure_scale = 1.0;

  PackedRaw() = default;
  PackedRaw(int h_, int w_) : h(h_), w(w_) {
    if (h_ <= 0 || w_ <= 0) throw DimensionError("plane dims must be positive");
    for (auto& p : ch) p.assign(static_cast<std::size_t>(h_) * w_, 0.0);
  }

  std::size_t plane_size() const { return static_cast<std::size_t>(h) * w; }
  bool same_shape(const PackedRaw& o) const { return h == o.h && w == o.w; }
};

enum PackedChannel { kR = 0, kG1 = 1, kG2 = 2, kB = 3 };

// Mosaic -> four planes. Plane c at (i, j) is the mosaic sample at the
// pattern's offset for that color inside cell (2i, 2j); channel order is
// canonicalized to [R, G1, G2, B] for every pattern. Values are copied as-is
// (digital numbers), exposure_scale = 1.
PackedRaw pack_bayer(const BayerImage& raw);

// Inverse of pack_bayer. Plane values are rounded to the nearest DN and
// clamped to the declared bit depth.
struct RawLevels {
  std::uint16_t black_level = 0;
  std::uint16_t white_level = 65535;
  int bit_depth = 16;
};
BayerImage unpack_bayer(const PackedRaw& packed, BayerPattern pattern,
                        const RawLevels& levels = {});

// Black-level correction + normalization, packed output:
// value = max((DN - black) / (white - black), 0). No clamp above 1: ground
// truth may legitimately exceed 1 after exposure alignment.
PackedRaw normalize_levels(const BayerImage& raw);

// Packed raw -> 3-channel linear RGB at plane resolution: R, (G1+G2)/2, B.
// No demosaicing, no white balance.
RGBImage naive_rgb(const PackedRaw& packed);

// Lossless casts between the double-precision packed form and the
// single-precision [4, h, w] engine tensor (values are rounded to binary32
// on the way in).
Tensor to_tensor(const PackedRaw& packed);
PackedRaw to_packed(const Tensor& t, double exposure_scale = 1.0);

}  // namespace rawhdr

#endif  // RAWHDR_BAYER_HPP_
