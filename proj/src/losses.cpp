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

#include "rawhdr/losses.hpp"

#include <cmath>

#include <json.hpp>

namespace rawhdr {

void validate(const LossWeights& w) {
  if (w.alpha < 0 || w.beta < 0 || w.gamma < 0 || w.eta_w < 0)
    throw ParameterError("loss weights must be non-negative");
}

LossWeights loss_weights_from_json(const std::string& json_text) {
  LossWeights w;
  try {
    const auto j = nlohmann::json::parse(json_text);
    w.alpha = j.value("alpha", w.alpha);
    w.beta = j.value("beta", w.beta);
    w.gamma = j.value("gamma", w.gamma);
    w.eta_w = j.value("eta_w", w.eta_w);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("bad loss weight config: ") + e.what());
  }
  validate(w);
  return w;
}

double l_pix(const PackedRaw& out, const PackedRaw& gt) {
  if (!out.same_shape(gt)) throw DimensionError("loss inputs differ in shape");
  double se = 0.0;
  for (int c = 0; c < 4; ++c)
    for (std::size_t i = 0; i < out.plane_size(); ++i) {
      const double d = out.ch[c][i] - gt.ch[c][i];
      se += d * d;
    }
  return std::sqrt(se / (4.0 * static_cast<double>(out.plane_size())));
}

double l_ssim(const PackedRaw& out, const PackedRaw& gt) {
  return 1.0 - ms_ssim(out, gt);
}

double l_amss(const PackedRaw& out, const PackedRaw& gt,
              const MaskPlane& mask) {
  if (!out.same_shape(gt)) throw DimensionError("loss inputs differ in shape");
  if (mask.h != out.h || mask.w != out.w)
    throw DimensionError("mask dimensions differ from image planes");
  for (std::uint8_t m : mask.v)
    if (m > 1) throw ValidationError("motion mask must be binary");

  PackedRaw out_m(out.h, out.w), gt_m(gt.h, gt.w);
  for (int c = 0; c < 4; ++c)
    for (std::size_t i = 0; i < out.plane_size(); ++i) {
      const double m = static_cast<double>(mask.v[i]);
      out_m.ch[c][i] = out.ch[c][i] * m;
      gt_m.ch[c][i] = gt.ch[c][i] * m;
    }
  return 1.0 - ms_ssim(out_m, gt_m);
}

double l_bayer(const PackedRaw& out, const PackedRaw& gt) {
  if (!out.same_shape(gt)) throw DimensionError("loss inputs differ in shape");
  const RGBImage a = naive_rgb(out);
  const RGBImage b = naive_rgb(gt);
  double acc = 0.0;
  for (std::size_t i = 0; i < a.plane_size(); ++i) {
    const double dot = a.ch[0][i] * b.ch[0][i] + a.ch[1][i] * b.ch[1][i] +
                       a.ch[2][i] * b.ch[2][i];
    const double na = a.ch[0][i] * a.ch[0][i] + a.ch[1][i] * a.ch[1][i] +
                      a.ch[2][i] * a.ch[2][i];
    const double nb = b.ch[0][i] * b.ch[0][i] + b.ch[1][i] * b.ch[1][i] +
                      b.ch[2][i] * b.ch[2][i];
    const double cosine =
        (na == 0.0 || nb == 0.0) ? 1.0 : dot / std::sqrt(na * nb);
    acc += 1.0 - cosine;
  }
  return acc / static_cast<double>(a.plane_size());
}

LossReport total_loss(const PackedRaw& out, const PackedRaw& gt,
                      const MaskPlane* mask, const LossWeights& w) {
  validate(w);
  LossReport r;
  r.l_pix = l_pix(out, gt);
  r.l_ssim = l_ssim(out, gt);
  if (mask != nullptr) {
    r.l_amss = l_amss(out, gt, *mask);
  } else {
    MaskPlane ones(out.h, out.w);
    std::fill(ones.v.begin(), ones.v.end(), std::uint8_t{1});
    r.l_amss = l_amss(out, gt, ones);
  }
  r.l_bayer = l_bayer(out, gt);
  r.total = w.alpha * r.l_amss + w.beta * r.l_bayer + w.gamma * r.l_pix +
            w.eta_w * r.l_ssim;
  return r;
}

}  // namespace rawhdr
