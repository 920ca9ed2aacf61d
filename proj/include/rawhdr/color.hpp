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

#ifndef RAWHDR_COLOR_HPP_
#define RAWHDR_COLOR_HPP_

#include <array>
#include <vector>

#include "rawhdr/errors.hpp"

namespace rawhdr {

// Three planar channels, equal dimensions. RGB is scene-linear with sRGB
// primaries / D65 white assumed; Lab is CIE L*a*b* (L in [0,100]).
struct PlanarImage3 {
  int h = 0;
  int w = 0;
  std::array<std::vector<double>, 3> ch;

  PlanarImage3() = default;
  PlanarImage3(int h_, int w_) : h(h_), w(w_) {
    if (h_ <= 0 || w_ <= 0) throw DimensionError("image dims must be positive");
    for (auto& p : ch) p.assign(static_cast<std::size_t>(h_) * w_, 0.0);
  }
  std::size_t plane_size() const { return static_cast<std::size_t>(h) * w; }
};

using RGBImage = PlanarImage3;
using LabImage = PlanarImage3;

// Scene-linear RGB -> CIE L*a*b*, D65. Inputs are clipped to [0,1] before
// conversion: values above 1 are outside the calibrated domain of the Lab
// transfer function, and the color-difference metric runs on
// luminance-normalized data.
//
// The white point is taken as the row sums of the RGB->XYZ matrix, so the
// neutral axis maps to a = b = 0 identically.
LabImage rgb_to_lab(const RGBImage& rgb);

// Scalar pixel version of the same transform.
std::array<double, 3> linear_rgb_pixel_to_lab(double r, double g, double b);

}  // namespace rawhdr

#endif  // RAWHDR_COLOR_HPP_
