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

#ifndef RAWHDR_METRICS_HPP_
#define RAWHDR_METRICS_HPP_

#include <limits>

#include "rawhdr/bayer.hpp"

namespace rawhdr {

struct MetricsReport {
  double psnr = 0.0;  // dB; +infinity when the inputs are identical
  double ssim = 0.0;
  double ms_ssim = 0.0;
  double delta_e = 0.0;
};

inline constexpr double kPsnrInfinity = std::numeric_limits<double>::infinity();

// 10*log10(peak^2 / MSE), MSE taken jointly over all four channels.
// Returns +infinity for identical inputs.
double psnr(const PackedRaw& a, const PackedRaw& b, double peak = 1.0);

// Gaussian-window SSIM (11 taps, sigma 1.5, K1 = 0.01, K2 = 0.03, unit
// dynamic range), mean over valid window positions, channel-wise then
// averaged over channels.
double ssim(const PackedRaw& a, const PackedRaw& b);

// Five-scale MS-SSIM with the standard weight vector
// (0.0448, 0.2856, 0.3001, 0.2363, 0.1333); 2x2 mean pooling between
// scales; contrast-structure terms clamped at zero before exponentiation so
// the score stays in [0, 1] for non-negative images. Requires planes of at
// least 176 x 176 so the deepest scale still fits one 11-tap window.
double ms_ssim(const PackedRaw& a, const PackedRaw& b);

// Mean per-pixel Euclidean Lab distance between naive RGB renderings of the
// two packed raws (the plain 1976 color-difference formula).
double delta_e(const PackedRaw& out, const PackedRaw& gt);

MetricsReport evaluate_metrics(const PackedRaw& out, const PackedRaw& gt);

namespace detail {
// Shared single-scale machinery, exposed for the loss layer.
// Returns {mean luminance term * cs term, mean cs term} over one plane.
struct SsimPlaneStats {
  double ssim_mean = 0.0;
  double cs_mean = 0.0;
};
SsimPlaneStats ssim_plane(const std::vector<double>& a,
                          const std::vector<double>& b, int h, int w);
int ms_ssim_min_side();
}  // namespace detail

}  // namespace rawhdr

#endif  // RAWHDR_METRICS_HPP_
