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

#include "rawhdr/color.hpp"

#include <algorithm>
#include <cmath>

namespace rawhdr {

namespace {

// Linear sRGB -> XYZ (D65), IEC 61966-2-1 derived coefficients.
constexpr double kM[3][3] = {
    {0.4123908, 0.3575843, 0.1804808},
    {0.2126390, 0.7151687, 0.0721923},
    {0.0193308, 0.1191948, 0.9505322},
};

// White point = matrix row sums, so (1,1,1) lands exactly on it.
constexpr double kXn = kM[0][0] + kM[0][1] + kM[0][2];
constexpr double kYn = kM[1][0] + kM[1][1] + kM[1][2];
constexpr double kZn = kM[2][0] + kM[2][1] + kM[2][2];

// CIE piecewise cube-root companding.
double lab_f(double t) {
  constexpr double kDelta = 6.0 / 29.0;
  constexpr double kCut = kDelta * kDelta * kDelta;
  if (t > kCut) return std::cbrt(t);
  return t / (3.0 * kDelta * kDelta) + 4.0 / 29.0;
}

}  // namespace

std::array<double, 3> linear_rgb_pixel_to_lab(double r, double g, double b) {
  r = std::clamp(r, 0.0, 1.0);
  g = std::clamp(g, 0.0, 1.0);
  b = std::clamp(b, 0.0, 1.0);
  const double x = kM[0][0] * r + kM[0][1] * g + kM[0][2] * b;
  const double y = kM[1][0] * r + kM[1][1] * g + kM[1][2] * b;
  const double z = kM[2][0] * r + kM[2][1] * g + kM[2][2] * b;
  const double fx = lab_f(x / kXn);
  const double fy = lab_f(y / kYn);
  const double fz = lab_f(z / kZn);
  return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

LabImage rgb_to_lab(const RGBImage& rgb) {
  LabImage lab(rgb.h, rgb.w);
  const std::size_t n = rgb.plane_size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto px =
        linear_rgb_pixel_to_lab(rgb.ch[0][i], rgb.ch[1][i], rgb.ch[2][i]);
    lab.ch[0][i] = px[0];
    lab.ch[1][i] = px[1];
    lab.ch[2][i] = px[2];
  }
  return lab;
}

}  // namespace rawhdr
