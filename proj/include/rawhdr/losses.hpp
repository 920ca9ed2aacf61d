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

#ifndef RAWHDR_LOSSES_HPP_
#define RAWHDR_LOSSES_HPP_

#include <string>

#include "rawhdr/metrics.hpp"
#include "rawhdr/pair.hpp"

namespace rawhdr {

// Weights of the combined objective:
// total = alpha * masked MS-SSIM term + beta * color term
//       + gamma * pixel term + eta_w * MS-SSIM term.
// (The MS-SSIM weight is called eta_w to keep it apart from the sensor
// model's quantization step.)
struct LossWeights {
  double alpha = 1.0;
  double beta = 1.0;
  double gamma = 1.0;
  double eta_w = 1.0;
};

void validate(const LossWeights& w);
LossWeights loss_weights_from_json(const std::string& json_text);

struct LossReport {
  double l_pix = 0.0;
  double l_ssim = 0.0;
  double l_amss = 0.0;
  double l_bayer = 0.0;
  double total = 0.0;
};

// Per-element RMSE over all four channels; resolution independent.
double l_pix(const PackedRaw& out, const PackedRaw& gt);

// 1 - MS-SSIM.
double l_ssim(const PackedRaw& out, const PackedRaw& gt);

// Motion-region selection loss: 1 - MS-SSIM of the mask-multiplied images
// (mask broadcast over channels, no window renormalization). The mask must
// be strictly binary. An all-zero mask compares two zero images and yields 0.
double l_amss(const PackedRaw& out, const PackedRaw& gt, const MaskPlane& mask);

// Color-cast loss: mean over pixels of 1 - cosine similarity between the
// naive RGB vectors of output and ground truth. A zero vector on either
// side counts as similarity 1 so black pixels carry no penalty.
double l_bayer(const PackedRaw& out, const PackedRaw& gt);

// Weighted sum of the four components; with no mask the selection term is
// evaluated with an all-ones mask (equal to l_ssim).
LossReport total_loss(const PackedRaw& out, const PackedRaw& gt,
                      const MaskPlane* mask, const LossWeights& w);

}  // namespace rawhdr

#endif  // RAWHDR_LOSSES_HPP_
