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

#ifndef RAWHDR_TENSOR_HPP_
#define RAWHDR_TENSOR_HPP_

#include <cstddef>
#include <string>
#include <vector>

#include "rawhdr/errors.hpp"

namespace rawhdr {

// Dense [C, H, W] tensor, contiguous row-major. The engine runs on the
// single-precision alias; the double instantiation exists for numerical
// cross-checks of the kernel-fusion algebra.
template <typename T>
struct TensorT {
  int c = 0;
  int h = 0;
  int w = 0;
  std::vector<T> v;

  TensorT() = default;
  TensorT(int c_, int h_, int w_)
      : c(c_), h(h_), w(w_), v(static_cast<std::size_t>(c_) * h_ * w_, T{}) {
    if (c_ <= 0 || h_ <= 0 || w_ <= 0)
      throw DimensionError("tensor dims must be positive");
  }

  std::size_t size() const { return v.size(); }
  std::size_t plane_size() const { return static_cast<std::size_t>(h) * w; }

  T& at(int ch, int y, int x) {
    return v[(static_cast<std::size_t>(ch) * h + y) * w + x];
  }
  T at(int ch, int y, int x) const {
    return v[(static_cast<std::size_t>(ch) * h + y) * w + x];
  }
  T* plane(int ch) { return v.data() + static_cast<std::size_t>(ch) * h * w; }
  const T* plane(int ch) const {
    return v.data() + static_cast<std::size_t>(ch) * h * w;
  }

  bool same_shape(const TensorT& o) const {
    return c == o.c && h == o.h && w == o.w;
  }
};

using Tensor = TensorT<float>;

// RTEN container: magic "RTEN", then little-endian u32 version, u32 ndim,
// u32 dims[ndim], then the payload as little-endian IEEE-754 binary32.
// Rank-3 files are read back as [C, H, W].
void write_rten(const std::string& path, const Tensor& t);
Tensor read_rten(const std::string& path);

}  // namespace rawhdr

#endif  // RAWHDR_TENSOR_HPP_
