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

#include "rawhdr/tensor.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace rawhdr {

namespace {

constexpr char kMagic[4] = {'R', 'T', 'E', 'N'};
constexpr std::uint32_t kVersion = 1;

static_assert(std::endian::native == std::endian::little,
              "RTEN I/O assumes a little-endian host");

void put_u32(std::ofstream& out, std::uint32_t v) {
  out.write(reinterpret_cast<const char*>(&v), 4);
}

std::uint32_t get_u32(std::ifstream& in, const std::string& path) {
  std::uint32_t v = 0;
  if (!in.read(reinterpret_cast<char*>(&v), 4))
    throw IoError("truncated RTEN header: " + path);
  return v;
}

}  // namespace

void write_rten(const std::string& path, const Tensor& t) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out.write(kMagic, 4);
  put_u32(out, kVersion);
  put_u32(out, 3);
  put_u32(out, static_cast<std::uint32_t>(t.c));
  put_u32(out, static_cast<std::uint32_t>(t.h));
  put_u32(out, static_cast<std::uint32_t>(t.w));
  out.write(reinterpret_cast<const char*>(t.v.data()),
            static_cast<std::streamsize>(t.v.size() * sizeof(float)));
  if (!out) throw IoError("short write: " + path);
}

Tensor read_rten(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path);
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0)
    throw IoError("not an RTEN file: " + path);
  const std::uint32_t version = get_u32(in, path);
  if (version != kVersion)
    throw IoError("unsupported RTEN version " + std::to_string(version) +
                  ": " + path);
  const std::uint32_t ndim = get_u32(in, path);
  if (ndim != 3) throw IoError("expected rank-3 RTEN tensor: " + path);
  const std::uint32_t c = get_u32(in, path);
  const std::uint32_t h = get_u32(in, path);
  const std::uint32_t w = get_u32(in, path);
  if (c == 0 || h == 0 || w == 0) throw IoError("zero RTEN dim: " + path);
  Tensor t(static_cast<int>(c), static_cast<int>(h), static_cast<int>(w));
  if (!in.read(reinterpret_cast<char*>(t.v.data()),
               static_cast<std::streamsize>(t.v.size() * sizeof(float))))
    throw IoError("truncated RTEN payload: " + path);
  return t;
}

}  // namespace rawhdr
