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

#include "rawhdr/pgm_io.hpp"

#include <cctype>
#include <cstdint>
#include <fstream>

#include <json.hpp>

namespace rawhdr {

namespace {

// Reads one PGM header token, skipping whitespace and '#' comments.
std::string next_token(std::istream& in) {
  std::string tok;
  int ch = in.get();
  while (ch != EOF) {
    if (ch == '#') {
      while (ch != EOF && ch != '\n') ch = in.get();
    } else if (std::isspace(ch)) {
      ch = in.get();
    } else {
      break;
    }
  }
  while (ch != EOF && !std::isspace(ch)) {
    tok.push_back(static_cast<char>(ch));
    ch = in.get();
  }
  return tok;
}

long parse_header_int(std::istream& in, const std::string& what,
                      const std::string& path) {
  const std::string tok = next_token(in);
  try {
    std::size_t pos = 0;
    const long v = std::stol(tok, &pos);
    if (pos != tok.size() || v <= 0) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw IoError("bad PGM " + what + " in " + path);
  }
}

}  // namespace

std::string sidecar_path(const std::string& pgm_path) {
  return pgm_path + ".json";
}

void write_pgm_raw(const std::string& path, const BayerImage& raw) {
  validate(raw);
  const std::uint32_t maxval = (1u << raw.bit_depth) - 1u;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << "P5\n" << raw.width << " " << raw.height << "\n" << maxval << "\n";
  if (maxval > 255) {
    std::vector<unsigned char> buf(raw.data.size() * 2);
    for (std::size_t i = 0; i < raw.data.size(); ++i) {
      buf[2 * i] = static_cast<unsigned char>(raw.data[i] >> 8);
      buf[2 * i + 1] = static_cast<unsigned char>(raw.data[i] & 0xFF);
    }
    out.write(reinterpret_cast<const char*>(buf.data()),
              static_cast<std::streamsize>(buf.size()));
  } else {
    std::vector<unsigned char> buf(raw.data.size());
    for (std::size_t i = 0; i < raw.data.size(); ++i)
      buf[i] = static_cast<unsigned char>(raw.data[i]);
    out.write(reinterpret_cast<const char*>(buf.data()),
              static_cast<std::streamsize>(buf.size()));
  }
  if (!out) throw IoError("short write: " + path);

  nlohmann::json meta;
  meta["pattern"] = to_string(raw.pattern);
  meta["black_level"] = raw.black_level;
  meta["white_level"] = raw.white_level;
  meta["bit_depth"] = raw.bit_depth;
  std::ofstream side(sidecar_path(path));
  if (!side) throw IoError("cannot open for writing: " + sidecar_path(path));
  side << meta.dump(2) << "\n";
}

BayerImage read_pgm_raw(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path);
  if (next_token(in) != "P5") throw IoError("not a binary PGM (P5): " + path);
  const long width = parse_header_int(in, "width", path);
  const long height = parse_header_int(in, "height", path);
  const long maxval = parse_header_int(in, "maxval", path);
  if (maxval > 65535) throw IoError("PGM maxval out of range: " + path);
  // Header ends with exactly one whitespace byte, already consumed by the
  // token reader.

  BayerImage raw;
  raw.width = static_cast<int>(width);
  raw.height = static_cast<int>(height);
  raw.data.assign(static_cast<std::size_t>(width) * height, 0);
  const std::size_t n = raw.data.size();
  if (maxval > 255) {
    std::vector<unsigned char> buf(n * 2);
    if (!in.read(reinterpret_cast<char*>(buf.data()),
                 static_cast<std::streamsize>(buf.size())))
      throw IoError("truncated PGM payload: " + path);
    for (std::size_t i = 0; i < n; ++i)
      raw.data[i] = static_cast<std::uint16_t>((buf[2 * i] << 8) | buf[2 * i + 1]);
  } else {
    std::vector<unsigned char> buf(n);
    if (!in.read(reinterpret_cast<char*>(buf.data()),
                 static_cast<std::streamsize>(buf.size())))
      throw IoError("truncated PGM payload: " + path);
    for (std::size_t i = 0; i < n; ++i) raw.data[i] = buf[i];
  }

  std::ifstream side(sidecar_path(path));
  if (!side) throw IoError("missing raw sidecar: " + sidecar_path(path));
  nlohmann::json meta;
  try {
    side >> meta;
    raw.pattern = bayer_pattern_from_string(meta.at("pattern").get<std::string>());
    raw.black_level = meta.at("black_level").get<std::uint16_t>();
    raw.white_level = meta.at("white_level").get<std::uint16_t>();
    raw.bit_depth = meta.at("bit_depth").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw IoError("bad raw sidecar " + sidecar_path(path) + ": " + e.what());
  }
  validate(raw);
  return raw;
}

}  // namespace rawhdr
