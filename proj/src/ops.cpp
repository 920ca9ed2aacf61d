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

#include "rawhdr/ops.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>

namespace rawhdr::ops {

int thread_count() {
  static const int count = [] {
    int n = static_cast<int>(std::thread::hardware_concurrency());
    if (n <= 0) n = 1;
    if (const char* env = std::getenv("RAWHDR_THREADS")) {
      const int cap = std::atoi(env);
      if (cap >= 1) n = std::min(n, cap);
    }
    return n;
  }();
  return count;
}

void parallel_for(std::size_t n,
                  const std::function<void(std::size_t, std::size_t)>& fn) {
  const int threads = thread_count();
  if (threads <= 1 || n < 2) {
    fn(0, n);
    return;
  }
  const std::size_t workers = std::min<std::size_t>(threads, n);
  const std::size_t chunk = (n + workers - 1) / workers;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t t = 0; t < workers; ++t) {
    const std::size_t lo = t * chunk;
    const std::size_t hi = std::min(lo + chunk, n);
    if (lo >= hi) break;
    pool.emplace_back([&fn, lo, hi] { fn(lo, hi); });
  }
  for (auto& th : pool) th.join();
}

Tensor conv2d_3x3(const Tensor& x, const ConvWeights& k) {
  if (k.c_in != x.c) throw DimensionError("conv3x3 channel mismatch");
  if (k.w.size() != static_cast<std::size_t>(k.c_out) * k.c_in * 9 ||
      k.b.size() != static_cast<std::size_t>(k.c_out))
    throw DimensionError("conv3x3 weight buffer size mismatch");
  Tensor out(k.c_out, x.h, x.w);
  const int h = x.h, w = x.w;
  parallel_for(static_cast<std::size_t>(k.c_out), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t co = lo; co < hi; ++co) {
      float* dst = out.plane(static_cast<int>(co));
      const float* wco = k.w.data() + co * static_cast<std::size_t>(k.c_in) * 9;
      const double bias = k.b[co];
      for (int y = 0; y < h; ++y) {
        const int ky0 = y == 0 ? 1 : 0;
        const int ky1 = y == h - 1 ? 2 : 3;
        for (int xo = 0; xo < w; ++xo) {
          const int kx0 = xo == 0 ? 1 : 0;
          const int kx1 = xo == w - 1 ? 2 : 3;
          double acc = bias;
          for (int ci = 0; ci < k.c_in; ++ci) {
            const float* src = x.plane(ci);
            const float* wci = wco + static_cast<std::size_t>(ci) * 9;
            for (int ky = ky0; ky < ky1; ++ky) {
              const float* row =
                  src + static_cast<std::size_t>(y + ky - 1) * w + xo - 1;
              const float* wrow = wci + ky * 3;
              for (int kx = kx0; kx < kx1; ++kx)
                acc += static_cast<double>(wrow[kx]) * row[kx];
            }
          }
          dst[static_cast<std::size_t>(y) * w + xo] = static_cast<float>(acc);
        }
      }
    }
  });
  return out;
}

Tensor conv2d_1x1(const Tensor& x, const std::vector<float>& w,
                  const std::vector<float>& b, int c_out) {
  if (w.size() != static_cast<std::size_t>(c_out) * x.c ||
      b.size() != static_cast<std::size_t>(c_out))
    throw DimensionError("conv1x1 weight buffer size mismatch");
  Tensor out(c_out, x.h, x.w);
  const std::size_t plane = x.plane_size();
  parallel_for(static_cast<std::size_t>(c_out), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t co = lo; co < hi; ++co) {
      float* dst = out.plane(static_cast<int>(co));
      const float* wco = w.data() + co * static_cast<std::size_t>(x.c);
      const double bias = b[co];
      for (std::size_t i = 0; i < plane; ++i) {
        double acc = bias;
        for (int ci = 0; ci < x.c; ++ci)
          acc += static_cast<double>(wco[ci]) * x.plane(ci)[i];
        dst[i] = static_cast<float>(acc);
      }
    }
  });
  return out;
}

Tensor depthwise_3x3(const Tensor& x, const double kernel[3][3],
                     const std::vector<float>& scale) {
  if (scale.size() != static_cast<std::size_t>(x.c))
    throw DimensionError("depthwise scale size mismatch");
  Tensor out(x.c, x.h, x.w);
  const int h = x.h, w = x.w;
  parallel_for(static_cast<std::size_t>(x.c), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t c = lo; c < hi; ++c) {
      const float* src = x.plane(static_cast<int>(c));
      float* dst = out.plane(static_cast<int>(c));
      const double s = scale[c];
      for (int y = 0; y < h; ++y) {
        const int ky0 = y == 0 ? 1 : 0;
        const int ky1 = y == h - 1 ? 2 : 3;
        for (int xo = 0; xo < w; ++xo) {
          const int kx0 = xo == 0 ? 1 : 0;
          const int kx1 = xo == w - 1 ? 2 : 3;
          double acc = 0.0;
          for (int ky = ky0; ky < ky1; ++ky) {
            const float* row =
                src + static_cast<std::size_t>(y + ky - 1) * w + xo - 1;
            for (int kx = kx0; kx < kx1; ++kx) acc += kernel[ky][kx] * row[kx];
          }
          dst[static_cast<std::size_t>(y) * w + xo] =
              static_cast<float>(s * acc);
        }
      }
    }
  });
  return out;
}

Tensor pixel_unshuffle2(const Tensor& x) {
  if (x.h % 2 != 0 || x.w % 2 != 0)
    throw DimensionError("pixel_unshuffle2 needs even spatial dims");
  Tensor out(x.c * 4, x.h / 2, x.w / 2);
  for (int c = 0; c < x.c; ++c)
    for (int dy = 0; dy < 2; ++dy)
      for (int dx = 0; dx < 2; ++dx) {
        const float* src = x.plane(c);
        float* dst = out.plane(c * 4 + dy * 2 + dx);
        for (int y = 0; y < out.h; ++y)
          for (int xo = 0; xo < out.w; ++xo)
            dst[static_cast<std::size_t>(y) * out.w + xo] =
                src[static_cast<std::size_t>(2 * y + dy) * x.w + 2 * xo + dx];
      }
  return out;
}

Tensor pixel_shuffle2(const Tensor& x) {
  if (x.c % 4 != 0)
    throw DimensionError("pixel_shuffle2 needs channels divisible by 4");
  Tensor out(x.c / 4, x.h * 2, x.w * 2);
  for (int c = 0; c < out.c; ++c)
    for (int dy = 0; dy < 2; ++dy)
      for (int dx = 0; dx < 2; ++dx) {
        const float* src = x.plane(c * 4 + dy * 2 + dx);
        float* dst = out.plane(c);
        for (int y = 0; y < x.h; ++y)
          for (int xo = 0; xo < x.w; ++xo)
            dst[static_cast<std::size_t>(2 * y + dy) * out.w + 2 * xo + dx] =
                src[static_cast<std::size_t>(y) * x.w + xo];
      }
  return out;
}

Tensor relu(const Tensor& x) {
  Tensor out = x;
  for (float& v : out.v) v = std::max(v, 0.0f);
  return out;
}

Tensor concat(const std::vector<const Tensor*>& xs) {
  if (xs.empty()) throw DimensionError("concat needs at least one input");
  int c_total = 0;
  for (const Tensor* t : xs) {
    if (t->h != xs[0]->h || t->w != xs[0]->w)
      throw DimensionError("concat inputs differ in spatial dims");
    c_total += t->c;
  }
  Tensor out(c_total, xs[0]->h, xs[0]->w);
  float* dst = out.v.data();
  for (const Tensor* t : xs) {
    std::copy(t->v.begin(), t->v.end(), dst);
    dst += t->v.size();
  }
  return out;
}

Tensor add(const Tensor& a, const Tensor& b) {
  if (!a.same_shape(b)) throw DimensionError("add inputs differ in shape");
  Tensor out = a;
  for (std::size_t i = 0; i < out.v.size(); ++i) out.v[i] += b.v[i];
  return out;
}

}  // namespace rawhdr::ops
