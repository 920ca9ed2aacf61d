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

#include "rawhdr/tcb.hpp"

namespace rawhdr::net {

const FixedKernels& fixed_kernels() {
  static const FixedKernels k = {
      // sobel_x
      {{-1, 0, 1}, {-2, 0, 2}, {-1, 0, 1}},
      // sobel_y
      {{-1, -2, -1}, {0, 0, 0}, {1, 2, 1}},
      // laplacian (4-neighbor)
      {{0, 1, 0}, {1, -4, 1}, {0, 1, 0}},
  };
  return k;
}

}  // namespace rawhdr::net
