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

#ifndef RAWHDR_OPS_HPP_
#define RAWHDR_OPS_HPP_

#include <cstddef>
#include <functional>
#include <vector>

#include "rawhdr/tensor.hpp"

namespace rawhdr::ops {

// Dense 3x3 convolution weights (cross-correlation convention throughout).
struct ConvWeights {
  int c_out = 0;
  int c_in = 0;
  std::vector<float> w;  // [c_out][c_in][3][3]
  std::vector<float> b;  // [c_out]
};

// Every op accumulates in double and rounds to binary32 at store, and each
// output element is produced by one fixed-order reduction, so results do not
// depend on how work is split across threads.

// Stride 1, zero padding 1; output spatial dims equal input.
Tensor conv2d_3x3(const Tensor& x, const ConvWeights& k);

// Pointwise mixing, no padding.
Tensor conv2d_1x1(const Tensor& x, const std::vector<float>& w,
                  const std::vector<float>& b, int c_out);

// Shared fixed 3x3 kernel applied per channel, then a per-channel scale;
// stride 1, zero padding 1. No bias.
Tensor depthwise_3x3(const Tensor& x, const double kernel[3][3],
                     const std::vector<float>& scale);

// [C, H, W] -> [4C, H/2, W/2]; output channel 4c + 2*dy + dx takes the
// (dy, dx) phase of input channel c. H and W must be even.
Tensor pixel_unshuffle2(const Tensor& x);

// Inverse of pixel_unshuffle2; C must be divisible by 4.
Tensor pixel_shuffle2(const Tensor& x);

Tensor relu(const Tensor& x);

// Channel concatenation of equally sized planes.
Tensor concat(const std::vector<const Tensor*>& xs);

Tensor add(const Tensor& a, const Tensor& b);

// Chunked parallel loop over [0, n); honors the RAWHDR_THREADS env cap and
// falls back to the caller thread for small n or a cap of 1.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn);
int thread_count();

}  // namespace rawhdr::ops

#endif  // RAWHDR_OPS_HPP_
