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

#include "rawhdr/pair.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "rawhdr/rng.hpp"

namespace rawhdr {

namespace {

// Substream indices off PairConfig::seed.
constexpr std::uint64_t kRatioStream = 0;
constexpr std::uint64_t kLongNoiseStream = 1;
constexpr std::uint64_t kShortNoiseStream = 2;
constexpr std::uint64_t kMotionStream = 3;
constexpr std::uint64_t kPatchShuffleStream = 4;

constexpr int kMinMotionPatch = 128;
constexpr int kRectMin = 40;
constexpr int kRectMax = 60;
constexpr int kOffsetMax = 30;

void check_clean_input(const PackedRaw& clean, const char* which) {
  for (const auto& plane : clean.ch)
    for (double v : plane)
      if (!std::isfinite(v) || v < 0)
        throw ValidationError(std::string(which) +
                              " input must be finite and non-negative");
}

int pick_ratio(const PairConfig& cfg) {
  if (cfg.ratio == 0) {
    Xoshiro256pp rng(derive_seed(cfg.seed, kRatioStream));
    const auto idx = rng.uniform_int(0, cfg.allowed_ratios.size() - 1);
    return cfg.allowed_ratios[static_cast<std::size_t>(idx)];
  }
  if (std::find(cfg.allowed_ratios.begin(), cfg.allowed_ratios.end(),
                cfg.ratio) == cfg.allowed_ratios.end())
    std::fprintf(stderr,
                 "warning: exposure ratio %d is outside the configured set\n",
                 cfg.ratio);
  return cfg.ratio;
}

}  // namespace

void validate(const PairConfig& cfg) {
  if (cfg.ratio != 0 && cfg.ratio < 2)
    throw ParameterError("exposure ratio must be >= 2");
  if (cfg.allowed_ratios.empty())
    throw ParameterError("allowed ratio set must not be empty");
  for (int r : cfg.allowed_ratios)
    if (r < 2) throw ParameterError("allowed ratios must be >= 2");
  if (cfg.bit_depth < 8 || cfg.bit_depth > 16)
    throw ParameterError("pair bit depth must be in [8, 16]");
  validate(cfg.noise_long);
  validate(cfg.noise_short);
}

PairSample form_pair(const PackedRaw& clean1, const PackedRaw& clean2,
                     const PairConfig& cfg) {
  validate(cfg);
  if (!clean1.same_shape(clean2))
    throw DimensionError("clean pair dimensions differ");
  check_clean_input(clean1, "long");
  check_clean_input(clean2, "short/gt");

  const int r = pick_ratio(cfg);
  const double ratio = static_cast<double>(r);
  const double max_dn = static_cast<double>((1u << cfg.bit_depth) - 1u);

  PairSample out;
  out.ratio = r;
  out.long_exposure = PackedRaw(clean1.h, clean1.w);
  out.short_exposure = PackedRaw(clean1.h, clean1.w);
  out.gt = PackedRaw(clean1.h, clean1.w);

  for (int c = 0; c < 4; ++c) {
    const double* src1 = clean1.ch[c].data();
    const double* src2 = clean2.ch[c].data();
    double* lp = out.long_exposure.ch[c].data();
    double* sp = out.short_exposure.ch[c].data();
    double* gp = out.gt.ch[c].data();
    const std::size_t n = clean1.plane_size();
    for (std::size_t i = 0; i < n; ++i) {
      // DN-domain exposure boost. The short exposure's boost by r and the
      // subsequent gain division cancel algebraically, so it is scaled once.
      const double long_dn = std::clamp(src1[i] * max_dn * ratio, 0.0, max_dn);
      const double short_dn = std::clamp(src2[i] * max_dn, 0.0, max_dn);
      lp[i] = long_dn / max_dn;
      sp[i] = short_dn / max_dn;
      gp[i] = src2[i] * max_dn / max_dn;  // no clip: gt keeps highlights
    }
  }

  out.long_exposure = add_noise(out.long_exposure, cfg.noise_long,
                                derive_seed(cfg.seed, kLongNoiseStream));
  out.short_exposure = add_noise(out.short_exposure, cfg.noise_short,
                                 derive_seed(cfg.seed, kShortNoiseStream));

  // Luminance alignment into the scene-linear short-exposure domain.
  for (auto& plane : out.long_exposure.ch)
    for (double& v : plane) v /= ratio;

  out.long_exposure.exposure_scale = 1.0;
  out.short_exposure.exposure_scale = 1.0;
  out.gt.exposure_scale = 1.0;
  return out;
}

MotionSpec sample_motion_spec(int h, int w, Xoshiro256pp& rng) {
  if (h < kMinMotionPatch || w < kMinMotionPatch)
    throw DimensionError("motion patch must be at least 128 x 128");
  MotionSpec spec;
  spec.rect_w = static_cast<int>(rng.uniform_int(kRectMin, kRectMax));
  spec.rect_h = static_cast<int>(rng.uniform_int(kRectMin, kRectMax));
  spec.dx = static_cast<int>(rng.uniform_int(0, 2 * kOffsetMax)) - kOffsetMax;
  spec.dy = static_cast<int>(rng.uniform_int(0, 2 * kOffsetMax)) - kOffsetMax;
  const int x_lo = std::max(0, -spec.dx);
  const int x_hi = w - spec.rect_w - std::max(0, spec.dx);
  const int y_lo = std::max(0, -spec.dy);
  const int y_hi = h - spec.rect_h - std::max(0, spec.dy);
  spec.x0 = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(x_lo),
                                             static_cast<std::uint64_t>(x_hi)));
  spec.y0 = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(y_lo),
                                             static_cast<std::uint64_t>(y_hi)));
  return spec;
}

std::pair<PackedRaw, MaskPlane> apply_motion(const PackedRaw& patch,
                                             const MotionSpec& spec) {
  const int sx = spec.x0, sy = spec.y0;
  const int dx = sx + spec.dx, dy = sy + spec.dy;
  if (spec.rect_w <= 0 || spec.rect_h <= 0 || sx < 0 || sy < 0 ||
      sx + spec.rect_w > patch.w || sy + spec.rect_h > patch.h || dx < 0 ||
      dy < 0 || dx + spec.rect_w > patch.w || dy + spec.rect_h > patch.h)
    throw DimensionError("motion rectangles must lie inside the patch");

  PackedRaw moved = patch;
  // Source and destination may overlap; snapshot the source block first.
  for (int c = 0; c < 4; ++c) {
    std::vector<double> block(static_cast<std::size_t>(spec.rect_h) *
                              spec.rect_w);
    for (int y = 0; y < spec.rect_h; ++y)
      for (int x = 0; x < spec.rect_w; ++x)
        block[static_cast<std::size_t>(y) * spec.rect_w + x] =
            patch.ch[c][static_cast<std::size_t>(sy + y) * patch.w + (sx + x)];
    for (int y = 0; y < spec.rect_h; ++y)
      for (int x = 0; x < spec.rect_w; ++x)
        moved.ch[c][static_cast<std::size_t>(dy + y) * patch.w + (dx + x)] =
            block[static_cast<std::size_t>(y) * spec.rect_w + x];
  }

  MaskPlane mask(patch.h, patch.w);
  for (int y = 0; y < spec.rect_h; ++y)
    for (int x = 0; x < spec.rect_w; ++x) {
      mask.at(sy + y, sx + x) = 1;
      mask.at(dy + y, dx + x) = 1;
    }
  return {std::move(moved), std::move(mask)};
}

std::tuple<PackedRaw, MaskPlane, MotionSpec> synth_motion(
    const PackedRaw& long_patch, std::uint64_t seed) {
  Xoshiro256pp rng(seed);
  const MotionSpec spec = sample_motion_spec(long_patch.h, long_patch.w, rng);
  auto [moved, mask] = apply_motion(long_patch, spec);
  return {std::move(moved), std::move(mask), spec};
}

PairSample build_quadruplet(const PackedRaw& clean1, const PackedRaw& clean2,
                            const PairConfig& cfg) {
  PairSample sample = form_pair(clean1, clean2, cfg);
  auto [moved, mask, spec] = synth_motion(
      sample.long_exposure, derive_seed(cfg.seed, kMotionStream));
  sample.long_exposure = std::move(moved);
  sample.mask = std::move(mask);
  sample.motion = spec;
  return sample;
}

std::vector<PairSample> extract_patches(const PairSample& sample, int size,
                                        int stride, std::uint64_t seed) {
  const int h = sample.gt.h, w = sample.gt.w;
  if (size <= 0 || stride <= 0)
    throw ParameterError("patch size and stride must be positive");
  if (size > h || size > w)
    throw DimensionError("patch size exceeds sample dimensions");

  auto crop_packed = [&](const PackedRaw& img, int y0, int x0) {
    PackedRaw out(size, size);
    out.exposure_scale = img.exposure_scale;
    for (int c = 0; c < 4; ++c)
      for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x)
          out.ch[c][static_cast<std::size_t>(y) * size + x] =
              img.ch[c][static_cast<std::size_t>(y0 + y) * w + (x0 + x)];
    return out;
  };

  std::vector<PairSample> patches;
  for (int y0 = 0; y0 + size <= h; y0 += stride)
    for (int x0 = 0; x0 + size <= w; x0 += stride) {
      PairSample p;
      p.ratio = sample.ratio;
      p.long_exposure = crop_packed(sample.long_exposure, y0, x0);
      p.short_exposure = crop_packed(sample.short_exposure, y0, x0);
      p.gt = crop_packed(sample.gt, y0, x0);
      if (sample.mask) {
        MaskPlane m(size, size);
        for (int y = 0; y < size; ++y)
          for (int x = 0; x < size; ++x)
            m.at(y, x) = sample.mask->at(y0 + y, x0 + x);
        p.mask = std::move(m);
      }
      patches.push_back(std::move(p));
    }

  // Deterministic order shuffle so batches drawn from the front are not
  // spatially correlated.
  Xoshiro256pp rng(derive_seed(seed, kPatchShuffleStream));
  for (std::size_t i = patches.size(); i > 1; --i)
    std::swap(patches[i - 1],
              patches[static_cast<std::size_t>(rng.uniform_int(0, i - 1))]);
  return patches;
}

}  // namespace rawhdr
