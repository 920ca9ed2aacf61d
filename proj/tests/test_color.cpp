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

#include <cmath>

#include <doctest.h>

#include "rawhdr/color.hpp"
#include "rawhdr/rng.hpp"
#include "support/oracles.hpp"

using namespace rawhdr;

TEST_SUITE_BEGIN("color");

TEST_CASE("white maps to L=100 on the neutral axis") {
  const auto lab = linear_rgb_pixel_to_lab(1.0, 1.0, 1.0);
  CHECK(lab[0] == doctest::Approx(100.0).epsilon(1e-9));
  CHECK(std::abs(lab[1]) < 0.01);
  CHECK(std::abs(lab[2]) < 0.01);
}

TEST_CASE("black maps to the Lab origin") {
  const auto lab = linear_rgb_pixel_to_lab(0.0, 0.0, 0.0);
  CHECK(lab[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(lab[1] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(lab[2] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("mid gray agrees with the reference formulas") {
  const auto lab = linear_rgb_pixel_to_lab(0.18, 0.18, 0.18);
  const auto ref = oracle::lab_pixel(0.18, 0.18, 0.18);
  CHECK(std::abs(lab[0] - ref[0]) < 0.05);
  CHECK(std::abs(lab[1] - ref[1]) < 0.05);
  CHECK(std::abs(lab[2] - ref[2]) < 0.05);
}

TEST_CASE("random pixels agree with the reference formulas") {
  Xoshiro256pp rng(21);
  for (int i = 0; i < 500; ++i) {
    const double r = rng.uniform(), g = rng.uniform(), b = rng.uniform();
    const auto lab = linear_rgb_pixel_to_lab(r, g, b);
    const auto ref = oracle::lab_pixel(r, g, b);
    for (int k = 0; k < 3; ++k) CHECK(std::abs(lab[k] - ref[k]) < 1e-6);
  }
}

TEST_CASE("values above one are clipped into the calibrated domain") {
  const auto hdr = linear_rgb_pixel_to_lab(2.5, 1.7, 4.0);
  const auto white = linear_rgb_pixel_to_lab(1.0, 1.0, 1.0);
  for (int k = 0; k < 3; ++k) CHECK(hdr[k] == white[k]);
}

TEST_CASE("image conversion matches the pixel conversion") {
  RGBImage rgb(2, 3);
  Xoshiro256pp rng(31);
  for (auto& plane : rgb.ch)
    for (double& v : plane) v = rng.uniform();
  const LabImage lab = rgb_to_lab(rgb);
  for (std::size_t i = 0; i < rgb.plane_size(); ++i) {
    const auto px =
        linear_rgb_pixel_to_lab(rgb.ch[0][i], rgb.ch[1][i], rgb.ch[2][i]);
    CHECK(lab.ch[0][i] == px[0]);
    CHECK(lab.ch[1][i] == px[1]);
    CHECK(lab.ch[2][i] == px[2]);
  }
}

TEST_SUITE_END();
