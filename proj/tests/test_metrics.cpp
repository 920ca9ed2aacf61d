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

#include "rawhdr/metrics.hpp"
#include "support/oracles.hpp"

using namespace rawhdr;

namespace {

PackedRaw shifted(const PackedRaw& base, double delta) {
  PackedRaw out = base;
  for (auto& plane : out.ch)
    for (double& v : plane) v += delta;
  return out;
}

}  // namespace

TEST_SUITE_BEGIN("metrics");

TEST_CASE("identical inputs hit the infinity sentinel") {
  const PackedRaw a = oracle::random_packed(32, 32, 1);
  CHECK(std::isinf(psnr(a, a)));
  CHECK(psnr(a, a) == kPsnrInfinity);
}

TEST_CASE("constant offsets give the closed-form dB values") {
  const PackedRaw a = oracle::random_packed(32, 32, 2, 0.0, 0.5);
  CHECK(psnr(a, shifted(a, 0.1)) == doctest::Approx(20.0).epsilon(1e-9));
  CHECK(psnr(a, shifted(a, 0.01)) == doctest::Approx(40.0).epsilon(1e-9));
}

TEST_CASE("psnr is symmetric and strictly decreasing in uniform error") {
  const PackedRaw a = oracle::random_packed(24, 24, 3);
  const PackedRaw b = oracle::random_packed(24, 24, 4);
  CHECK(psnr(a, b) == psnr(b, a));
  double prev = kPsnrInfinity;
  for (double d : {0.01, 0.02, 0.05, 0.1, 0.2}) {
    const double v = psnr(a, shifted(a, d));
    CHECK(v < prev);
    prev = v;
  }
}

TEST_CASE("psnr rejects shape mismatches") {
  const PackedRaw a = oracle::random_packed(8, 8, 5);
  const PackedRaw b = oracle::random_packed(8, 10, 6);
  CHECK_THROWS_AS(psnr(a, b), DimensionError);
}

TEST_CASE("ssim of an image with itself is exactly one") {
  const PackedRaw a = oracle::random_packed(64, 64, 7);
  CHECK(ssim(a, a) == 1.0);
}

TEST_CASE("ssim is bitwise symmetric") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const PackedRaw a = oracle::random_packed(24, 24, 1000 + seed);
    const PackedRaw b = oracle::random_packed(24, 24, 2000 + seed);
    CHECK(ssim(a, b) == ssim(b, a));
  }
}

TEST_CASE("ssim matches an independent direct implementation") {
  // fixed 256x256 pair: an image and a noisy copy of it
  const PackedRaw a = oracle::random_packed(256, 256, 7);
  PackedRaw b = a;
  Xoshiro256pp rng(7);
  for (auto& plane : b.ch)
    for (double& v : plane) v += 0.05 * (rng.uniform() - 0.5);
  double ref = 0.0;
  for (int c = 0; c < 4; ++c)
    ref += oracle::ssim_plane_direct(a.ch[c], b.ch[c], a.h, a.w).ssim;
  ref /= 4.0;
  CHECK(std::abs(ssim(a, b) - ref) < 1e-6);
}

TEST_CASE("ms_ssim matches the direct multi-scale oracle") {
  const PackedRaw a = oracle::random_packed(192, 192, 9);
  PackedRaw b = a;
  Xoshiro256pp rng(10);
  for (auto& plane : b.ch)
    for (double& v : plane) v = std::max(v + 0.03 * (rng.uniform() - 0.5), 0.0);
  double ref = 0.0;
  for (int c = 0; c < 4; ++c)
    ref += oracle::ms_ssim_plane_direct(a.ch[c], b.ch[c], a.h, a.w);
  ref /= 4.0;
  CHECK(std::abs(ms_ssim(a, b) - ref) < 1e-6);
}

TEST_CASE("ms_ssim identity, bounds, and sensitivity") {
  const PackedRaw a = oracle::random_packed(176, 176, 11);
  CHECK(ms_ssim(a, a) == doctest::Approx(1.0).epsilon(1e-12));
  const PackedRaw b = oracle::random_packed(176, 176, 12);
  const double v = ms_ssim(a, b);
  CHECK(v >= 0.0);
  CHECK(v <= 1.0);
  CHECK(v < 1.0 - 1e-9);
  PackedRaw nudged = a;
  nudged.ch[0][5000] += 0.2;
  CHECK(ms_ssim(a, nudged) < 1.0 - 1e-9);
}

TEST_CASE("ms_ssim refuses images too small for five scales") {
  const PackedRaw a = oracle::random_packed(128, 128, 13);
  CHECK_THROWS_AS(ms_ssim(a, a), DimensionError);
}

TEST_CASE("delta_e identities") {
  const PackedRaw a = oracle::random_packed(16, 16, 14);
  CHECK(delta_e(a, a) == 0.0);
}

TEST_CASE("neutral gray level steps reduce to the lightness difference") {
  PackedRaw a(8, 8), b(8, 8);
  for (int c = 0; c < 4; ++c)
    for (std::size_t i = 0; i < a.plane_size(); ++i) {
      a.ch[c][i] = 0.25;
      b.ch[c][i] = 0.55;
    }
  const auto la = oracle::lab_pixel(0.25, 0.25, 0.25);
  const auto lb = oracle::lab_pixel(0.55, 0.55, 0.55);
  CHECK(delta_e(a, b) ==
        doctest::Approx(std::abs(la[0] - lb[0])).epsilon(1e-6));
}

TEST_CASE("delta_e grows along a fixed perturbation ray") {
  const PackedRaw gt = oracle::random_packed(16, 16, 15, 0.1, 0.7);
  const PackedRaw dir = oracle::random_packed(16, 16, 16, 0.0, 1.0);
  double prev = 0.0;
  for (double eps : {0.01, 0.02, 0.04}) {
    PackedRaw out = gt;
    for (int c = 0; c < 4; ++c)
      for (std::size_t i = 0; i < out.plane_size(); ++i)
        out.ch[c][i] += eps * dir.ch[c][i];
    const double v = delta_e(out, gt);
    CHECK(v >= prev);
    prev = v;
  }
  CHECK(prev > 0.0);
}

TEST_CASE("per-pixel Lab distance obeys the triangle inequality in the mean") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const PackedRaw a = oracle::random_packed(8, 8, 100 + seed);
    const PackedRaw b = oracle::random_packed(8, 8, 200 + seed);
    const PackedRaw c = oracle::random_packed(8, 8, 300 + seed);
    CHECK(delta_e(a, c) <= delta_e(a, b) + delta_e(b, c) + 1e-9);
  }
}

TEST_SUITE_END();
