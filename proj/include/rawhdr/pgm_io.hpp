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

#ifndef RAWHDR_PGM_IO_HPP_
#define RAWHDR_PGM_IO_HPP_

#include <string>

#include "rawhdr/bayer.hpp"

namespace rawhdr {

// Mosaics travel as binary Netpbm PGM (P5) with maxval 2^bit_depth - 1 and
// big-endian samples when maxval > 255, plus a JSON sidecar at
// "<path>.json" holding {pattern, black_level, white_level, bit_depth}.
void write_pgm_raw(const std::string& path, const BayerImage& raw);
BayerImage read_pgm_raw(const std::string& path);

std::string sidecar_path(const std::string& pgm_path);

}  // namespace rawhdr

#endif  // RAWHDR_PGM_IO_HPP_
