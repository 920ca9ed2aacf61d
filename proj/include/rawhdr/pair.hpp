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

#ifndef RAWHDR_PAIR_HPP_
#define RAWHDR_PAIR_HPP_

#include <cstdint>
#include <optional>
#include <tuple>
#include <utility>
#include <vector>

#include "rawhdr/bayer.hpp"
#include "rawhdr/rng.hpp"
#include "rawhdr/sensor.hpp"

namespace rawhdr {

// Configuration for one synthesized double-exposure pair.
//
// ratio == 0 samples the exposure ratio uniformly from allowed_ratios using
// the seed; a fixed ratio outside the allowed set is accepted with a warning
// (ratios are not restricted to powers of two in general).
struct PairConfig {
  int ratio = 0;
  std::vector<int> allowed_ratios = {4, 8, 16};
  int bit_depth = 12;  // max DN 4095
  NoiseModel noise_long = default_long_noise();
  NoiseModel noise_short = default_short_noise();
  std::uint64_t seed = 0;
};

void validate(const PairConfig& cfg);

// Binary mask plane; 1 marks motion regions in the long exposure.
struct MaskPlane {
  int h = 0;
  int w = 0;
  std::vector<std::uint8_t> v;

  MaskPlane() = default;
  MaskPlane(int h_, int w_)
      : h(h_), w(w_), v(static_cast<std::size_t>(h_) * w_, 0) {}
  std::uint8_t at(int y, int x) const {
    return v[static_cast<std::size_t>(y) * w + x];
  }
  std::uint8_t& at(int y, int x) {
    return v[static_cast<std::size_t>(y) * w + x];
  }
};

// Synthetic displacement of one rectangle inside a patch: the rectangle at
// origin is copied to origin+offset (copy overwrites, source keeps its
// content) and both footprints are flagged in the mask.
struct MotionSpec {
  int rect_w = 0;  // in [40, 60]
  int rect_h = 0;  // in [40, 60]
  int dx = 0;      // in [-30, 30]
  int dy = 0;      // in [-30, 30]
  int x0 = 0;      // source origin, both rectangles fully inside the patch
  int y0 = 0;
};

// Training quadruplet: aligned noisy long/short exposures, clean aligned
// ground truth, optional motion mask, and the exposure ratio used.
struct PairSample {
  PackedRaw long_exposure;
  PackedRaw short_exposure;
  PackedRaw gt;
  std::optional<MaskPlane> mask;
  std::optional<MotionSpec> motion;
  int ratio = 0;
};

// Double-exposure simulation from a quasi-static pair of clean normalized
// raws (clean1 feeds the long exposure, clean2 the short exposure and the
// ground truth).
//
// With max_dn = 2^bit_depth - 1 and per-pixel input value c:
//   long  : clip(c1 * max_dn * r, 0, max_dn), noise, / max_dn, then / r
//   short : clip(c2 * max_dn, 0, max_dn), noise, / max_dn
//   gt    : c2 * max_dn / max_dn (no clip, no noise)
// so all three outputs live in the scene-linear short-exposure domain
// (exposure_scale 1.0). The scale/unscale pairs are ordered so that for
// power-of-two ratios static unsaturated noise-free pixels come out
// bitwise identical across long, short, and gt.
//
// Noise streams: derive_seed(cfg.seed, 1) for long, 2 for short; the ratio
// draw (when ratio == 0) uses stream 0.
PairSample form_pair(const PackedRaw& clean1, const PackedRaw& clean2,
                     const PairConfig& cfg);

// Samples a MotionSpec whose source and destination rectangles both fit in
// an h x w patch. Draw order: rect_w, rect_h, dx, dy, x0, y0.
MotionSpec sample_motion_spec(int h, int w, Xoshiro256pp& rng);

// Applies a given spec; returns the displaced patch and the union mask.
std::pair<PackedRaw, MaskPlane> apply_motion(const PackedRaw& patch,
                                             const MotionSpec& spec);

// sample_motion_spec + apply_motion with a fresh stream from `seed`.
// The patch must be at least 128 x 128 so any legal spec fits.
std::tuple<PackedRaw, MaskPlane, MotionSpec> synth_motion(
    const PackedRaw& long_patch, std::uint64_t seed);

// form_pair, then motion synthesis on the aligned noisy long exposure
// (stream derive_seed(cfg.seed, 3)); mask and spec are attached. The ground
// truth is never touched by the displacement.
PairSample build_quadruplet(const PackedRaw& clean1, const PackedRaw& clean2,
                            const PairConfig& cfg);

// Grid tiling of a sample into size x size patches at the given stride
// ((floor((H-size)/stride)+1) * (floor((W-size)/stride)+1) patches), with
// the output order deterministically shuffled from `seed` (stream 4).
std::vector<PairSample> extract_patches(const PairSample& sample, int size,
                                        int stride, std::uint64_t seed);

}  // namespace rawhdr

#endif  // RAWHDR_PAIR_HPP_
