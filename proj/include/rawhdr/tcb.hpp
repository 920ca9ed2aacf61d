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
//
// Topological convolution block: a training-time bundle of parallel linear
// branches (dense 3x3, expand/squeeze pair, fixed first/second-derivative
// taps behind pointwise mixers, pointwise mixing, identity) that collapses
// analytically into one dense 3x3 convolution for inference.
//
// All branches are evaluated on the once-padded block input: conceptually
// the block pads its input with a single zero ring and every branch reads
// from that extended domain, so the pointwise stages of composite branches
// spill their biases into the ring. That convention is what makes the
// fused kernel reproduce the multi-branch output everywhere, border
// included.

#ifndef RAWHDR_TCB_HPP_
#define RAWHDR_TCB_HPP_

#include <cmath>
#include <vector>

#include "rawhdr/errors.hpp"
#include "rawhdr/tensor.hpp"

namespace rawhdr::net {

struct FixedKernels {
  double sobel_x[3][3];
  double sobel_y[3][3];
  double laplacian[3][3];
};

// Horizontal/vertical Sobel and the 4-neighbor Laplacian; every kernel sums
// to zero, so these branches never contribute to the fused bias.
const FixedKernels& fixed_kernels();

template <typename T>
struct Conv3x3T {
  int c_out = 0;
  int c_in = 0;
  std::vector<T> w;  // [c_out][c_in][3][3]
  std::vector<T> b;  // [c_out]

  Conv3x3T() = default;
  Conv3x3T(int c_out_, int c_in_)
      : c_out(c_out_),
        c_in(c_in_),
        w(static_cast<std::size_t>(c_out_) * c_in_ * 9, T{}),
        b(static_cast<std::size_t>(c_out_), T{}) {}
};

using Conv3x3 = Conv3x3T<float>;

enum class TcbVariant { kEncoder, kDecoder };

// The decoder variant adds the Laplacian branch (second derivatives only
// help once the features are denoised); the identity branch is only legal
// for shape-preserving blocks.
template <typename T>
struct TcbParamsT {
  int c_in = 0;
  int c_out = 0;
  int c_mid = 0;
  TcbVariant variant = TcbVariant::kEncoder;
  bool use_identity = false;

  Conv3x3T<T> main3x3;                     // c_out x c_in
  std::vector<T> expand_w, expand_b;       // [c_mid][c_in], [c_mid]
  Conv3x3T<T> squeeze3x3;                  // c_out x c_mid
  std::vector<T> sobel_pre_w, sobel_pre_b; // [c_out][c_in], [c_out]
  std::vector<T> sobel_scale_x, sobel_scale_y;  // [c_out]
  std::vector<T> lap_pre_w, lap_pre_b, lap_scale;  // decoder only
  std::vector<T> conv1x1_w, conv1x1_b;     // [c_out][c_in], [c_out]
};

using TcbParams = TcbParamsT<float>;

template <typename T>
TcbParamsT<T> make_tcb(int c_out, int c_in, TcbVariant variant,
                       bool use_identity, int expand_ratio = 2) {
  if (c_out <= 0 || c_in <= 0 || expand_ratio < 1)
    throw ParameterError("tcb channel counts must be positive");
  if (use_identity && c_in != c_out)
    throw ValidationError("identity branch requires matching channel counts");
  TcbParamsT<T> p;
  p.c_in = c_in;
  p.c_out = c_out;
  p.c_mid = expand_ratio * c_out;
  p.variant = variant;
  p.use_identity = use_identity;
  p.main3x3 = Conv3x3T<T>(c_out, c_in);
  p.expand_w.assign(static_cast<std::size_t>(p.c_mid) * c_in, T{});
  p.expand_b.assign(static_cast<std::size_t>(p.c_mid), T{});
  p.squeeze3x3 = Conv3x3T<T>(c_out, p.c_mid);
  p.sobel_pre_w.assign(static_cast<std::size_t>(c_out) * c_in, T{});
  p.sobel_pre_b.assign(static_cast<std::size_t>(c_out), T{});
  p.sobel_scale_x.assign(static_cast<std::size_t>(c_out), T{});
  p.sobel_scale_y.assign(static_cast<std::size_t>(c_out), T{});
  if (variant == TcbVariant::kDecoder) {
    p.lap_pre_w.assign(static_cast<std::size_t>(c_out) * c_in, T{});
    p.lap_pre_b.assign(static_cast<std::size_t>(c_out), T{});
    p.lap_scale.assign(static_cast<std::size_t>(c_out), T{});
  }
  p.conv1x1_w.assign(static_cast<std::size_t>(c_out) * c_in, T{});
  p.conv1x1_b.assign(static_cast<std::size_t>(c_out), T{});
  return p;
}

template <typename T>
void validate(const TcbParamsT<T>& p) {
  if (p.c_in <= 0 || p.c_out <= 0 || p.c_mid <= 0)
    throw ValidationError("tcb channel counts must be positive");
  if (p.use_identity && p.c_in != p.c_out)
    throw ValidationError("identity branch requires matching channel counts");
  const bool has_lap = !p.lap_pre_w.empty();
  if (has_lap != (p.variant == TcbVariant::kDecoder))
    throw ValidationError("laplacian branch is exactly the decoder variant");
  auto expect = [](std::size_t got, std::size_t want, const char* what) {
    if (got != want)
      throw ValidationError(std::string("tcb buffer size mismatch: ") + what);
  };
  const auto co = static_cast<std::size_t>(p.c_out);
  const auto ci = static_cast<std::size_t>(p.c_in);
  const auto cm = static_cast<std::size_t>(p.c_mid);
  expect(p.main3x3.w.size(), co * ci * 9, "main weights");
  expect(p.main3x3.b.size(), co, "main bias");
  expect(p.expand_w.size(), cm * ci, "expand weights");
  expect(p.expand_b.size(), cm, "expand bias");
  expect(p.squeeze3x3.w.size(), co * cm * 9, "squeeze weights");
  expect(p.squeeze3x3.b.size(), co, "squeeze bias");
  expect(p.sobel_pre_w.size(), co * ci, "sobel pre weights");
  expect(p.sobel_pre_b.size(), co, "sobel pre bias");
  expect(p.sobel_scale_x.size(), co, "sobel x scale");
  expect(p.sobel_scale_y.size(), co, "sobel y scale");
  if (has_lap) {
    expect(p.lap_pre_w.size(), co * ci, "laplacian pre weights");
    expect(p.lap_pre_b.size(), co, "laplacian pre bias");
    expect(p.lap_scale.size(), co, "laplacian scale");
  }
  expect(p.conv1x1_w.size(), co * ci, "pointwise weights");
  expect(p.conv1x1_b.size(), co, "pointwise bias");
}

namespace detail {

// Zero ring of width 1 around every plane.
template <typename T>
TensorT<T> zero_pad1(const TensorT<T>& x) {
  TensorT<T> out(x.c, x.h + 2, x.w + 2);
  for (int c = 0; c < x.c; ++c)
    for (int y = 0; y < x.h; ++y) {
      const T* src = x.plane(c) + static_cast<std::size_t>(y) * x.w;
      T* dst = out.plane(c) + static_cast<std::size_t>(y + 1) * out.w + 1;
      for (int xo = 0; xo < x.w; ++xo) dst[xo] = src[xo];
    }
  return out;
}

// Valid-mode dense 3x3 on an already padded input: (h, w) -> (h-2, w-2).
template <typename T>
TensorT<T> conv3x3_valid(const TensorT<T>& x, const Conv3x3T<T>& k) {
  TensorT<T> out(k.c_out, x.h - 2, x.w - 2);
  for (int co = 0; co < k.c_out; ++co) {
    T* dst = out.plane(co);
    for (int y = 0; y < out.h; ++y)
      for (int xo = 0; xo < out.w; ++xo) {
        double acc = static_cast<double>(k.b[co]);
        for (int ci = 0; ci < k.c_in; ++ci) {
          const T* src = x.plane(ci);
          const T* wk = k.w.data() +
                        (static_cast<std::size_t>(co) * k.c_in + ci) * 9;
          for (int ky = 0; ky < 3; ++ky) {
            const T* row = src + static_cast<std::size_t>(y + ky) * x.w + xo;
            for (int kx = 0; kx < 3; ++kx)
              acc += static_cast<double>(wk[ky * 3 + kx]) *
                     static_cast<double>(row[kx]);
          }
        }
        dst[static_cast<std::size_t>(y) * out.w + xo] = static_cast<T>(acc);
      }
  }
  return out;
}

template <typename T>
TensorT<T> conv1x1(const TensorT<T>& x, const std::vector<T>& w,
                   const std::vector<T>& b, int c_out) {
  TensorT<T> out(c_out, x.h, x.w);
  const std::size_t plane = x.plane_size();
  for (int co = 0; co < c_out; ++co) {
    T* dst = out.plane(co);
    for (std::size_t i = 0; i < plane; ++i) {
      double acc = static_cast<double>(b[static_cast<std::size_t>(co)]);
      for (int ci = 0; ci < x.c; ++ci)
        acc += static_cast<double>(
                   w[static_cast<std::size_t>(co) * x.c + ci]) *
               static_cast<double>(x.plane(ci)[i]);
      dst[i] = static_cast<T>(acc);
    }
  }
  return out;
}

// Valid-mode fixed depthwise tap with per-channel output scale, no bias.
template <typename T>
TensorT<T> depthwise_valid(const TensorT<T>& x, const double kernel[3][3],
                           const std::vector<T>& scale) {
  TensorT<T> out(x.c, x.h - 2, x.w - 2);
  for (int c = 0; c < x.c; ++c) {
    const T* src = x.plane(c);
    T* dst = out.plane(c);
    const double s = static_cast<double>(scale[static_cast<std::size_t>(c)]);
    for (int y = 0; y < out.h; ++y)
      for (int xo = 0; xo < out.w; ++xo) {
        double acc = 0.0;
        for (int ky = 0; ky < 3; ++ky) {
          const T* row = src + static_cast<std::size_t>(y + ky) * x.w + xo;
          for (int kx = 0; kx < 3; ++kx)
            acc += kernel[ky][kx] * static_cast<double>(row[kx]);
        }
        dst[static_cast<std::size_t>(y) * out.w + xo] =
            static_cast<T>(s * acc);
      }
  }
  return out;
}

template <typename T>
void accumulate(TensorT<T>& dst, const TensorT<T>& src) {
  for (std::size_t i = 0; i < dst.v.size(); ++i) dst.v[i] += src.v[i];
}

}  // namespace detail

// Multi-branch forward pass. Stride 1 everywhere; spatial dims preserved.
template <typename T>
TensorT<T> tcb_forward(const TcbParamsT<T>& p, const TensorT<T>& x) {
  validate(p);
  if (x.c != p.c_in) throw DimensionError("tcb input channel mismatch");
  const FixedKernels& fixed = fixed_kernels();
  const TensorT<T> xp = detail::zero_pad1(x);

  TensorT<T> out = detail::conv3x3_valid(xp, p.main3x3);
  {
    const TensorT<T> mid = detail::conv1x1(xp, p.expand_w, p.expand_b, p.c_mid);
    detail::accumulate(out, detail::conv3x3_valid(mid, p.squeeze3x3));
  }
  {
    const TensorT<T> pre =
        detail::conv1x1(xp, p.sobel_pre_w, p.sobel_pre_b, p.c_out);
    detail::accumulate(out,
                       detail::depthwise_valid(pre, fixed.sobel_x,
                                               p.sobel_scale_x));
    detail::accumulate(out,
                       detail::depthwise_valid(pre, fixed.sobel_y,
                                               p.sobel_scale_y));
  }
  if (p.variant == TcbVariant::kDecoder) {
    const TensorT<T> pre =
        detail::conv1x1(xp, p.lap_pre_w, p.lap_pre_b, p.c_out);
    detail::accumulate(out,
                       detail::depthwise_valid(pre, fixed.laplacian,
                                               p.lap_scale));
  }
  detail::accumulate(out,
                     detail::conv1x1(x, p.conv1x1_w, p.conv1x1_b, p.c_out));
  if (p.use_identity) detail::accumulate(out, x);
  return out;
}

// Collapses every branch into one dense 3x3 kernel and bias:
//   * expand/squeeze contracts over the mid channels (scalar times kernel);
//     its bias term picks up each squeeze kernel's tap sum times the expand
//     bias, plus the squeeze bias;
//   * each derivative branch contributes scale * fixed_kernel * pre_weight;
//     the fixed kernels sum to zero, so their pre-biases cancel exactly;
//   * the pointwise branch lands on the kernel center;
//   * the identity branch adds a center delta on the channel diagonal.
// Arithmetic runs in double regardless of T and rounds once at the end.
template <typename T>
Conv3x3T<T> tcb_fuse(const TcbParamsT<T>& p) {
  validate(p);
  const FixedKernels& fixed = fixed_kernels();
  std::vector<double> w(static_cast<std::size_t>(p.c_out) * p.c_in * 9, 0.0);
  std::vector<double> b(static_cast<std::size_t>(p.c_out), 0.0);

  auto wk = [&](int o, int i) {
    return w.data() + (static_cast<std::size_t>(o) * p.c_in + i) * 9;
  };

  double sum_sx = 0.0, sum_sy = 0.0, sum_lap = 0.0;
  for (int u = 0; u < 3; ++u)
    for (int v = 0; v < 3; ++v) {
      sum_sx += fixed.sobel_x[u][v];
      sum_sy += fixed.sobel_y[u][v];
      sum_lap += fixed.laplacian[u][v];
    }

  for (int o = 0; o < p.c_out; ++o) {
    const auto ob = static_cast<std::size_t>(o);
    b[ob] += static_cast<double>(p.main3x3.b[ob]);
    for (int i = 0; i < p.c_in; ++i) {
      double* dst = wk(o, i);
      const T* main = p.main3x3.w.data() +
                      (static_cast<std::size_t>(o) * p.c_in + i) * 9;
      for (int t = 0; t < 9; ++t) dst[t] += static_cast<double>(main[t]);
    }

    // expand (1x1) then squeeze (3x3)
    for (int m = 0; m < p.c_mid; ++m) {
      const T* sq = p.squeeze3x3.w.data() +
                    (static_cast<std::size_t>(o) * p.c_mid + m) * 9;
      double sq_sum = 0.0;
      for (int t = 0; t < 9; ++t) sq_sum += static_cast<double>(sq[t]);
      b[ob] += sq_sum * static_cast<double>(p.expand_b[static_cast<std::size_t>(m)]);
      for (int i = 0; i < p.c_in; ++i) {
        const double e =
            static_cast<double>(p.expand_w[static_cast<std::size_t>(m) * p.c_in + i]);
        double* dst = wk(o, i);
        for (int t = 0; t < 9; ++t)
          dst[t] += static_cast<double>(sq[t]) * e;
      }
    }
    b[ob] += static_cast<double>(p.squeeze3x3.b[ob]);

    // derivative branches
    const double sx = static_cast<double>(p.sobel_scale_x[ob]);
    const double sy = static_cast<double>(p.sobel_scale_y[ob]);
    for (int i = 0; i < p.c_in; ++i) {
      const double pre =
          static_cast<double>(p.sobel_pre_w[ob * static_cast<std::size_t>(p.c_in) + i]);
      double* dst = wk(o, i);
      for (int u = 0; u < 3; ++u)
        for (int v = 0; v < 3; ++v)
          dst[u * 3 + v] +=
              (sx * fixed.sobel_x[u][v] + sy * fixed.sobel_y[u][v]) * pre;
    }
    b[ob] += (sx * sum_sx + sy * sum_sy) *
             static_cast<double>(p.sobel_pre_b[ob]);
    if (p.variant == TcbVariant::kDecoder) {
      const double sl = static_cast<double>(p.lap_scale[ob]);
      for (int i = 0; i < p.c_in; ++i) {
        const double pre =
            static_cast<double>(p.lap_pre_w[ob * static_cast<std::size_t>(p.c_in) + i]);
        double* dst = wk(o, i);
        for (int u = 0; u < 3; ++u)
          for (int v = 0; v < 3; ++v)
            dst[u * 3 + v] += sl * fixed.laplacian[u][v] * pre;
      }
      b[ob] += sl * sum_lap * static_cast<double>(p.lap_pre_b[ob]);
    }

    // pointwise branch on the kernel center
    for (int i = 0; i < p.c_in; ++i)
      wk(o, i)[4] += static_cast<double>(
          p.conv1x1_w[ob * static_cast<std::size_t>(p.c_in) + i]);
    b[ob] += static_cast<double>(p.conv1x1_b[ob]);

    if (p.use_identity) wk(o, o)[4] += 1.0;
  }

  Conv3x3T<T> fused(p.c_out, p.c_in);
  for (std::size_t t = 0; t < w.size(); ++t)
    fused.w[t] = static_cast<T>(w[t]);
  for (std::size_t t = 0; t < b.size(); ++t)
    fused.b[t] = static_cast<T>(b[t]);
  return fused;
}

// Reference dense 3x3 with a zero-padded ring, matching the engine op; used
// to run the fused kernel at arbitrary precision.
template <typename T>
TensorT<T> conv3x3_ref(const TensorT<T>& x, const Conv3x3T<T>& k) {
  if (x.c != k.c_in) throw DimensionError("conv3x3 channel mismatch");
  return detail::conv3x3_valid(detail::zero_pad1(x), k);
}

// Parameter tally for one block: weights plus biases plus per-channel scales.
template <typename T>
std::size_t tcb_param_count(const TcbParamsT<T>& p) {
  std::size_t n = p.main3x3.w.size() + p.main3x3.b.size() + p.expand_w.size() +
                  p.expand_b.size() + p.squeeze3x3.w.size() +
                  p.squeeze3x3.b.size() + p.sobel_pre_w.size() +
                  p.sobel_pre_b.size() + p.sobel_scale_x.size() +
                  p.sobel_scale_y.size() + p.conv1x1_w.size() +
                  p.conv1x1_b.size();
  n += p.lap_pre_w.size() + p.lap_pre_b.size() + p.lap_scale.size();
  return n;
}

}  // namespace rawhdr::net

#endif  // RAWHDR_TCB_HPP_
