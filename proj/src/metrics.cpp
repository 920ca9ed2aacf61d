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

#include "rawhdr/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace rawhdr {

namespace {

constexpr int kWindow = 11;
constexpr double kSigma = 1.5;
constexpr double kK1 = 0.01;
constexpr double kK2 = 0.03;
constexpr double kDynamicRange = 1.0;
constexpr double kC1 = (kK1 * kDynamicRange) * (kK1 * kDynamicRange);
constexpr double kC2 = (kK2 * kDynamicRange) * (kK2 * kDynamicRange);

constexpr int kScales = 5;
constexpr std::array<double, kScales> kScaleWeights = {0.0448, 0.2856, 0.3001,
                                                       0.2363, 0.1333};

const std::array<double, kWindow>& gaussian_window() {
  static const std::array<double, kWindow> win = [] {
    std::array<double, kWindow> w{};
    double sum = 0.0;
    for (int i = 0; i < kWindow; ++i) {
      const double d = i - (kWindow - 1) / 2.0;
      w[i] = std::exp(-d * d / (2.0 * kSigma * kSigma));
      sum += w[i];
    }
    for (double& v : w) v /= sum;
    return w;
  }();
  return win;
}

// Separable valid-mode Gaussian filter: (h, w) -> (h - 10, w - 10).
std::vector<double> gauss_filter_valid(const std::vector<double>& src, int h,
                                       int w) {
  const auto& win = gaussian_window();
  const int wo = w - kWindow + 1;
  const int ho = h - kWindow + 1;
  std::vector<double> tmp(static_cast<std::size_t>(h) * wo);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < wo; ++x) {
      double acc = 0.0;
      const double* row = src.data() + static_cast<std::size_t>(y) * w + x;
      for (int k = 0; k < kWindow; ++k) acc += win[k] * row[k];
      tmp[static_cast<std::size_t>(y) * wo + x] = acc;
    }
  std::vector<double> out(static_cast<std::size_t>(ho) * wo);
  for (int y = 0; y < ho; ++y)
    for (int x = 0; x < wo; ++x) {
      double acc = 0.0;
      for (int k = 0; k < kWindow; ++k)
        acc += win[k] * tmp[static_cast<std::size_t>(y + k) * wo + x];
      out[static_cast<std::size_t>(y) * wo + x] = acc;
    }
  return out;
}

std::vector<double> downsample2(const std::vector<double>& src, int h, int w,
                                int& ho, int& wo) {
  ho = h / 2;
  wo = w / 2;
  std::vector<double> out(static_cast<std::size_t>(ho) * wo);
  for (int y = 0; y < ho; ++y)
    for (int x = 0; x < wo; ++x)
      out[static_cast<std::size_t>(y) * wo + x] =
          0.25 * (src[static_cast<std::size_t>(2 * y) * w + 2 * x] +
                  src[static_cast<std::size_t>(2 * y) * w + 2 * x + 1] +
                  src[static_cast<std::size_t>(2 * y + 1) * w + 2 * x] +
                  src[static_cast<std::size_t>(2 * y + 1) * w + 2 * x + 1]);
  return out;
}

void check_same_shape(const PackedRaw& a, const PackedRaw& b) {
  if (!a.same_shape(b)) throw DimensionError("metric inputs differ in shape");
}

double ms_ssim_plane(std::vector<double> a, std::vector<double> b, int h,
                     int w) {
  double score = 1.0;
  for (int scale = 0; scale < kScales; ++scale) {
    const auto stats = detail::ssim_plane(a, b, h, w);
    const double term = (scale == kScales - 1)
                            ? std::max(stats.ssim_mean, 0.0)
                            : std::max(stats.cs_mean, 0.0);
    score *= std::pow(term, kScaleWeights[static_cast<std::size_t>(scale)]);
    if (scale + 1 < kScales) {
      int ho = 0, wo = 0;
      a = downsample2(a, h, w, ho, wo);
      b = downsample2(b, h, w, ho, wo);
      h = ho;
      w = wo;
    }
  }
  return score;
}

}  // namespace

namespace detail {

SsimPlaneStats ssim_plane(const std::vector<double>& a,
                          const std::vector<double>& b, int h, int w) {
  if (h < kWindow || w < kWindow)
    throw DimensionError("image too small for the 11-tap SSIM window");
  const std::size_t n = static_cast<std::size_t>(h) * w;
  std::vector<double> aa(n), bb(n), ab(n);
  for (std::size_t i = 0; i < n; ++i) {
    aa[i] = a[i] * a[i];
    bb[i] = b[i] * b[i];
    ab[i] = a[i] * b[i];
  }
  const auto mu_a = gauss_filter_valid(a, h, w);
  const auto mu_b = gauss_filter_valid(b, h, w);
  const auto m_aa = gauss_filter_valid(aa, h, w);
  const auto m_bb = gauss_filter_valid(bb, h, w);
  const auto m_ab = gauss_filter_valid(ab, h, w);

  double ssim_sum = 0.0, cs_sum = 0.0;
  for (std::size_t i = 0; i < mu_a.size(); ++i) {
    const double ma = mu_a[i], mb = mu_b[i];
    const double va = m_aa[i] - ma * ma;
    const double vb = m_bb[i] - mb * mb;
    const double cov = m_ab[i] - ma * mb;
    const double lum = (2.0 * ma * mb + kC1) / (ma * ma + mb * mb + kC1);
    const double cs = (2.0 * cov + kC2) / (va + vb + kC2);
    ssim_sum += lum * cs;
    cs_sum += cs;
  }
  const double count = static_cast<double>(mu_a.size());
  return {ssim_sum / count, cs_sum / count};
}

int ms_ssim_min_side() {
  // Four 2x downsamplings must leave at least one full window.
  return kWindow << (kScales - 1);
}

}  // namespace detail

double psnr(const PackedRaw& a, const PackedRaw& b, double peak) {
  check_same_shape(a, b);
  if (!(peak > 0)) throw ParameterError("psnr peak must be positive");
  double se = 0.0;
  for (int c = 0; c < 4; ++c)
    for (std::size_t i = 0; i < a.plane_size(); ++i) {
      const double d = a.ch[c][i] - b.ch[c][i];
      se += d * d;
    }
  if (se == 0.0) return kPsnrInfinity;
  const double mse = se / (4.0 * static_cast<double>(a.plane_size()));
  return 10.0 * std::log10(peak * peak / mse);
}

double ssim(const PackedRaw& a, const PackedRaw& b) {
  check_same_shape(a, b);
  double acc = 0.0;
  for (int c = 0; c < 4; ++c)
    acc += detail::ssim_plane(a.ch[c], b.ch[c], a.h, a.w).ssim_mean;
  return acc / 4.0;
}

double ms_ssim(const PackedRaw& a, const PackedRaw& b) {
  check_same_shape(a, b);
  if (a.h < detail::ms_ssim_min_side() || a.w < detail::ms_ssim_min_side())
    throw DimensionError("planes must be at least 176 x 176 for 5-scale "
                         "MS-SSIM");
  double acc = 0.0;
  for (int c = 0; c < 4; ++c)
    acc += ms_ssim_plane(a.ch[c], b.ch[c], a.h, a.w);
  return acc / 4.0;
}

double delta_e(const PackedRaw& out, const PackedRaw& gt) {
  check_same_shape(out, gt);
  const LabImage lab_out = rgb_to_lab(naive_rgb(out));
  const LabImage lab_gt = rgb_to_lab(naive_rgb(gt));
  double acc = 0.0;
  for (std::size_t i = 0; i < lab_out.plane_size(); ++i) {
    const double dl = lab_out.ch[0][i] - lab_gt.ch[0][i];
    const double da = lab_out.ch[1][i] - lab_gt.ch[1][i];
    const double db = lab_out.ch[2][i] - lab_gt.ch[2][i];
    acc += std::sqrt(dl * dl + da * da + db * db);
  }
  return acc / static_cast<double>(lab_out.plane_size());
}

MetricsReport evaluate_metrics(const PackedRaw& out, const PackedRaw& gt) {
  MetricsReport r;
  r.psnr = psnr(out, gt);
  r.ssim = ssim(out, gt);
  r.ms_ssim = ms_ssim(out, gt);
  r.delta_e = delta_e(out, gt);
  return r;
}

}  // namespace rawhdr
