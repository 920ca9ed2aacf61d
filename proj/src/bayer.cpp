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

#include "rawhdr/bayer.hpp"

#include <algorithm>
#include <cmath>

namespace rawhdr {

namespace {

// (dy, dx) offsets of [R, G1, G2, B] inside one 2x2 cell, per pattern.
struct CellOffsets {
  int dy[4];
  int dx[4];
};

CellOffsets offsets_for(BayerPattern p) {
  switch (p) {
    case BayerPattern::kRGGB:
      return {{0, 0, 1, 1}, {0, 1, 0, 1}};
    case BayerPattern::kBGGR:
      return {{1, 0, 1, 0}, {1, 1, 0, 0}};
    case BayerPattern::kGRBG:
      return {{0, 0, 1, 1}, {1, 0, 1, 0}};
    case BayerPattern::kGBRG:
      return {{1, 0, 1, 0}, {0, 0, 1, 1}};
  }
  throw ValidationError("unknown Bayer pattern");
}

}  // namespace

BayerPattern bayer_pattern_from_string(const std::string& s) {
  if (s == "RGGB") return BayerPattern::kRGGB;
  if (s == "BGGR") return BayerPattern::kBGGR;
  if (s == "GRBG") return BayerPattern::kGRBG;
  if (s == "GBRG") return BayerPattern::kGBRG;
  throw ValidationError("unknown Bayer pattern: " + s);
}

std::string to_string(BayerPattern p) {
  switch (p) {
    case BayerPattern::kRGGB: return "RGGB";
    case BayerPattern::kBGGR: return "BGGR";
    case BayerPattern::kGRBG: return "GRBG";
    case BayerPattern::kGBRG: return "GBRG";
  }
  return "RGGB";
}

void validate(const BayerImage& raw) {
  if (raw.width <= 0 || raw.height <= 0)
    throw DimensionError("mosaic dims must be positive");
  if (raw.width % 2 != 0 || raw.height % 2 != 0)
    throw DimensionError("mosaic dims must be even");
  if (raw.data.size() != static_cast<std::size_t>(raw.width) * raw.height)
    throw DimensionError("mosaic buffer size does not match dims");
  if (raw.bit_depth < 1 || raw.bit_depth > 16)
    throw ParameterError("bit depth must be in [1, 16]");
  if (raw.black_level >= raw.white_level)
    throw ParameterError("black level must be below white level");
  const std::uint32_t max_dn = (1u << raw.bit_depth) - 1u;
  if (raw.white_level > max_dn)
    throw ParameterError("white level exceeds bit depth");
  for (std::uint16_t dn : raw.data)
    if (dn > max_dn) throw ValidationError("sample exceeds declared bit depth");
}

PackedRaw pack_bayer(const BayerImage& raw) {
  validate(raw);
  const CellOffsets off = offsets_for(raw.pattern);
  PackedRaw out(raw.height / 2, raw.width / 2);
  for (int c = 0; c < 4; ++c) {
    double* plane = out.ch[c].data();
    for (int i = 0; i < out.h; ++i) {
      const int y = 2 * i + off.dy[c];
      for (int j = 0; j < out.w; ++j)
        plane[static_cast<std::size_t>(i) * out.w + j] =
            raw.at(y, 2 * j + off.dx[c]);
    }
  }
  return out;
}

BayerImage unpack_bayer(const PackedRaw& packed, BayerPattern pattern,
                        const RawLevels& levels) {
  BayerImage raw;
  raw.width = packed.w * 2;
  raw.height = packed.h * 2;
  raw.pattern = pattern;
  raw.black_level = levels.black_level;
  raw.white_level = levels.white_level;
  raw.bit_depth = levels.bit_depth;
  raw.data.assign(static_cast<std::size_t>(raw.width) * raw.height, 0);
  const CellOffsets off = offsets_for(pattern);
  const double max_dn = static_cast<double>((1u << levels.bit_depth) - 1u);
  for (int c = 0; c < 4; ++c) {
    const double* plane = packed.ch[c].data();
    for (int i = 0; i < packed.h; ++i) {
      const int y = 2 * i + off.dy[c];
      for (int j = 0; j < packed.w; ++j) {
        const double v = std::clamp(
            std::round(plane[static_cast<std::size_t>(i) * packed.w + j]), 0.0,
            max_dn);
        raw.at(y, 2 * j + off.dx[c]) = static_cast<std::uint16_t>(v);
      }
    }
  }
  return raw;
}

PackedRaw normalize_levels(const BayerImage& raw) {
  PackedRaw packed = pack_bayer(raw);
  const double black = raw.black_level;
  const double range = static_cast<double>(raw.white_level) - black;
  for (auto& plane : packed.ch)
    for (double& v : plane) v = std::max((v - black) / range, 0.0);
  packed.exposure_scale = 1.0;
  return packed;
}

RGBImage naive_rgb(const PackedRaw& packed) {
  RGBImage rgb(packed.h, packed.w);
  const std::size_t n = packed.plane_size();
  for (std::size_t i = 0; i < n; ++i) {
    rgb.ch[0][i] = packed.ch[kR][i];
    rgb.ch[1][i] = 0.5 * (packed.ch[kG1][i] + packed.ch[kG2][i]);
    rgb.ch[2][i] = packed.ch[kB][i];
  }
  return rgb;
}

Tensor to_tensor(const PackedRaw& packed) {
  Tensor t(4, packed.h, packed.w);
  for (int c = 0; c < 4; ++c) {
    float* dst = t.plane(c);
    const double* src = packed.ch[c].data();
    for (std::size_t i = 0; i < packed.plane_size(); ++i)
      dst[i] = static_cast<float>(src[i]);
  }
  return t;
}

PackedRaw to_packed(const Tensor& t, double exposure_scale) {
  if (t.c != 4) throw DimensionError("packed raw tensor must have 4 channels");
  PackedRaw packed(t.h, t.w);
  packed.exposure_scale = exposure_scale;
  for (int c = 0; c < 4; ++c) {
    const float* src = t.plane(c);
    double* dst = packed.ch[c].data();
    for (std::size_t i = 0; i < packed.plane_size(); ++i) dst[i] = src[i];
  }
  return packed;
}

}  // namespace rawhdr
