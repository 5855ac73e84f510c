// Copyright 2026 The spectrocam Authors
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

#include "spectrocam/layers.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <utility>

#include <Eigen/Core>
#include <fmt/format.h>

namespace spectrocam::layers {
namespace {

template <typename T>
using RowMat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename T>
using MatMap = Eigen::Map<RowMat<T>>;
template <typename T>
using ConstMatMap = Eigen::Map<const RowMat<T>>;

struct ConvGeometry {
  std::size_t n, c, h, w;
  std::size_t co, k;
  std::size_t ho, wo;
  int stride, pad;

  std::size_t patch() const { return c * k * k; }
  std::size_t out_pixels() const { return ho * wo; }
};

template <typename T>
ConvGeometry conv_geometry(const Tensor<T>& input, const Tensor<T>& weight, int stride,
                           int padding) {
  if (input.rank() != 4 || weight.rank() != 4) {
    throw ShapeError(fmt::format("conv2d expects rank-4 input and weight, got {} and {}",
                                 shape_string(input.shape()), shape_string(weight.shape())));
  }
  if (weight.dim(1) != input.dim(1)) {
    throw ShapeError(fmt::format("conv2d channel mismatch: input {} vs weight {}",
                                 shape_string(input.shape()), shape_string(weight.shape())));
  }
  const std::size_t k = weight.dim(2);
  if (weight.dim(3) != k || k % 2 == 0) {
    throw ShapeError(fmt::format("conv2d needs a square odd kernel, got {}",
                                 shape_string(weight.shape())));
  }
  if (stride < 1 || padding < 0) throw ShapeError("conv2d needs stride >= 1 and padding >= 0");
  ConvGeometry g{input.dim(0), input.dim(1), input.dim(2), input.dim(3), weight.dim(0), k,
                 0, 0, stride, padding};
  const auto span_h = static_cast<long long>(g.h) + 2 * padding - static_cast<long long>(k);
  const auto span_w = static_cast<long long>(g.w) + 2 * padding - static_cast<long long>(k);
  if (span_h < 0 || span_w < 0) {
    throw ShapeError(fmt::format("conv2d kernel larger than padded input {}",
                                 shape_string(input.shape())));
  }
  g.ho = static_cast<std::size_t>(span_h / stride + 1);
  g.wo = static_cast<std::size_t>(span_w / stride + 1);
  return g;
}

// cols[(c*k + ky)*k + kx][oy*wo + ox] = in[c][oy*s - p + ky][ox*s - p + kx]
// Output columns [lo, hi) whose input column ox * stride - pad + kx is inside [0, w).
inline std::pair<std::size_t, std::size_t> valid_range(std::size_t out, std::size_t in, int stride,
                                                       int pad, std::size_t kx) {
  const long long s = stride;
  const long long off = static_cast<long long>(kx) - pad;
  const long long lo = off >= 0 ? 0 : (-off + s - 1) / s;
  const long long hi_raw = (static_cast<long long>(in) - off + s - 1) / s;
  const long long hi = std::clamp<long long>(hi_raw, lo, static_cast<long long>(out));
  return {static_cast<std::size_t>(std::min<long long>(lo, static_cast<long long>(out))),
          static_cast<std::size_t>(hi)};
}

template <typename T>
void im2col(const T* in, const ConvGeometry& g, T* cols) {
  const auto h = static_cast<long long>(g.h);
  for (std::size_t c = 0; c < g.c; ++c) {
    const T* plane = in + c * g.h * g.w;
    for (std::size_t ky = 0; ky < g.k; ++ky) {
      for (std::size_t kx = 0; kx < g.k; ++kx) {
        T* row = cols + ((c * g.k + ky) * g.k + kx) * g.out_pixels();
        const auto [lo, hi] = valid_range(g.wo, g.w, g.stride, g.pad, kx);
        const long long off = static_cast<long long>(kx) - g.pad;
        for (std::size_t oy = 0; oy < g.ho; ++oy) {
          const long long iy = static_cast<long long>(oy) * g.stride - g.pad + static_cast<long long>(ky);
          T* dst = row + oy * g.wo;
          if (iy < 0 || iy >= h || lo >= hi) {
            std::fill(dst, dst + g.wo, T{0});
            continue;
          }
          std::fill(dst, dst + lo, T{0});
          std::fill(dst + hi, dst + g.wo, T{0});
          const T* src = plane + iy * static_cast<long long>(g.w);
          if (g.stride == 1) {
            std::copy(src + (static_cast<long long>(lo) + off), src + (static_cast<long long>(hi) + off),
                      dst + lo);
          } else {
            for (std::size_t ox = lo; ox < hi; ++ox) {
              dst[ox] = src[static_cast<long long>(ox) * g.stride + off];
            }
          }
        }
      }
    }
  }
}

template <typename T>
void col2im_add(const T* cols, const ConvGeometry& g, T* in) {
  const auto h = static_cast<long long>(g.h);
  for (std::size_t c = 0; c < g.c; ++c) {
    T* plane = in + c * g.h * g.w;
    for (std::size_t ky = 0; ky < g.k; ++ky) {
      for (std::size_t kx = 0; kx < g.k; ++kx) {
        const T* row = cols + ((c * g.k + ky) * g.k + kx) * g.out_pixels();
        const auto [lo, hi] = valid_range(g.wo, g.w, g.stride, g.pad, kx);
        const long long off = static_cast<long long>(kx) - g.pad;
        for (std::size_t oy = 0; oy < g.ho; ++oy) {
          const long long iy = static_cast<long long>(oy) * g.stride - g.pad + static_cast<long long>(ky);
          if (iy < 0 || iy >= h) continue;
          const T* src = row + oy * g.wo;
          T* dst = plane + iy * static_cast<long long>(g.w);
          for (std::size_t ox = lo; ox < hi; ++ox) {
            dst[static_cast<long long>(ox) * g.stride + off] += src[ox];
          }
        }
      }
    }
  }
}

template <typename T>
using Acc = std::conditional_t<std::is_same_v<T, float>, double, T>;

// Stride-1 "same" convolutions skip im2col. The input is zero-padded to
// [c, hp, wp]; for each kernel tap the padded planes, offset by the tap,
// form a [c x h*wp] strided view, so the output on a width-wp grid is a sum
// of k*k small GEMMs. Columns ox >= w of that grid are discarded.
template <typename T>
using StridedMap = Eigen::Map<const RowMat<T>, 0, Eigen::OuterStride<>>;
template <typename T>
using MutStridedMap = Eigen::Map<RowMat<T>, 0, Eigen::OuterStride<>>;

struct SameGeometry {
  std::size_t hp, wp, plane, buffer;
  explicit SameGeometry(const ConvGeometry& g)
      : hp(g.h + 2 * static_cast<std::size_t>(g.pad)),
        wp(g.w + 2 * static_cast<std::size_t>(g.pad)),
        plane(hp * wp),
        buffer(g.c * hp * wp + 2 * static_cast<std::size_t>(g.pad)) {}
};

template <typename T>
void bias_grad(const Tensor<T>& grad_output, const ConvGeometry& g, Tensor<T>& out) {
  for (std::size_t o = 0; o < g.co; ++o) {
    Acc<T> sum{0};
    for (std::size_t n = 0; n < g.n; ++n) {
      const T* row = grad_output.data() + (n * g.co + o) * g.out_pixels();
      for (std::size_t i = 0; i < g.out_pixels(); ++i) sum += row[i];
    }
    out[o] = static_cast<T>(sum);
  }
}

bool is_same_conv(const ConvGeometry& g) { return g.stride == 1 && 2 * g.pad + 1 == static_cast<int>(g.k); }

template <typename T>
void pad_into(const T* in, const ConvGeometry& g, const SameGeometry& s, T* buf) {
  std::fill(buf, buf + s.buffer, T{0});
  const auto p = static_cast<std::size_t>(g.pad);
  for (std::size_t c = 0; c < g.c; ++c) {
    for (std::size_t y = 0; y < g.h; ++y) {
      const T* src = in + (c * g.h + y) * g.w;
      std::copy(src, src + g.w, buf + c * s.plane + (y + p) * s.wp + p);
    }
  }
}

// taps[t] is the [co x c] slice of weight for tap t = ky * k + kx.
template <typename T>
std::vector<RowMat<T>> split_taps(const Tensor<T>& weight, const ConvGeometry& g) {
  const std::size_t kk = g.k * g.k;
  std::vector<RowMat<T>> taps(kk, RowMat<T>(static_cast<Eigen::Index>(g.co),
                                            static_cast<Eigen::Index>(g.c)));
  for (std::size_t o = 0; o < g.co; ++o) {
    for (std::size_t c = 0; c < g.c; ++c) {
      const T* src = weight.data() + (o * g.c + c) * kk;
      for (std::size_t t = 0; t < kk; ++t) {
        taps[t](static_cast<Eigen::Index>(o), static_cast<Eigen::Index>(c)) = src[t];
      }
    }
  }
  return taps;
}

template <typename T>
void same_conv_forward(const Tensor<T>& input, const Tensor<T>& weight, const Tensor<T>& bias,
                       const ConvGeometry& g, Tensor<T>& out) {
  const SameGeometry s(g);
  const auto taps = split_taps(weight, g);
  const auto co = static_cast<Eigen::Index>(g.co);
  const auto cin = static_cast<Eigen::Index>(g.c);
  const auto wide_cols = static_cast<Eigen::Index>(g.h * s.wp);
  std::vector<T> buf(s.buffer);
  RowMat<T> wide(co, wide_cols);
  for (std::size_t n = 0; n < g.n; ++n) {
    pad_into(input.data() + n * g.c * g.h * g.w, g, s, buf.data());
    wide.setZero();
    for (std::size_t ky = 0; ky < g.k; ++ky) {
      for (std::size_t kx = 0; kx < g.k; ++kx) {
        const StridedMap<T> view(buf.data() + ky * s.wp + kx, cin, wide_cols,
                                 Eigen::OuterStride<>(static_cast<Eigen::Index>(s.plane)));
        wide.noalias() += taps[ky * g.k + kx] * view;
      }
    }
    for (std::size_t o = 0; o < g.co; ++o) {
      const T b = bias[o];
      T* dst = out.data() + (n * g.co + o) * g.h * g.w;
      const T* src = wide.data() + static_cast<std::size_t>(o) * g.h * s.wp;
      for (std::size_t y = 0; y < g.h; ++y) {
        for (std::size_t x = 0; x < g.w; ++x) dst[y * g.w + x] = src[y * s.wp + x] + b;
      }
    }
  }
}

template <typename T>
void same_conv_backward(const Tensor<T>& input, const Tensor<T>& weight,
                        const Tensor<T>& grad_output, const ConvGeometry& g,
                        Conv2dGrads<T>& grads, bool need_input_grad) {
  const SameGeometry s(g);
  const auto taps = split_taps(weight, g);
  const std::size_t kk = g.k * g.k;
  const auto co = static_cast<Eigen::Index>(g.co);
  const auto cin = static_cast<Eigen::Index>(g.c);
  const auto wide_cols = static_cast<Eigen::Index>(g.h * s.wp);
  const Eigen::OuterStride<> stride(static_cast<Eigen::Index>(s.plane));
  std::vector<T> buf(s.buffer);
  std::vector<T> gbuf(need_input_grad ? s.buffer : 0);
  RowMat<T> go_wide = RowMat<T>::Zero(co, wide_cols);
  std::vector<RowMat<T>> gtaps(kk, RowMat<T>::Zero(co, cin));
  const auto p = static_cast<std::size_t>(g.pad);

  for (std::size_t n = 0; n < g.n; ++n) {
    for (std::size_t o = 0; o < g.co; ++o) {
      const T* src = grad_output.data() + (n * g.co + o) * g.h * g.w;
      T* dst = go_wide.data() + o * g.h * s.wp;
      for (std::size_t y = 0; y < g.h; ++y) std::copy(src + y * g.w, src + (y + 1) * g.w, dst + y * s.wp);
    }
    pad_into(input.data() + n * g.c * g.h * g.w, g, s, buf.data());
    for (std::size_t ky = 0; ky < g.k; ++ky) {
      for (std::size_t kx = 0; kx < g.k; ++kx) {
        const StridedMap<T> view(buf.data() + ky * s.wp + kx, cin, wide_cols, stride);
        gtaps[ky * g.k + kx].noalias() += go_wide * view.transpose();
      }
    }
    if (!need_input_grad) continue;
    std::fill(gbuf.begin(), gbuf.end(), T{0});
    for (std::size_t ky = 0; ky < g.k; ++ky) {
      for (std::size_t kx = 0; kx < g.k; ++kx) {
        MutStridedMap<T> view(gbuf.data() + ky * s.wp + kx, cin, wide_cols, stride);
        view.noalias() += taps[ky * g.k + kx].transpose() * go_wide;
      }
    }
    for (std::size_t c = 0; c < g.c; ++c) {
      T* dst = grads.input.data() + (n * g.c + c) * g.h * g.w;
      for (std::size_t y = 0; y < g.h; ++y) {
        const T* src = gbuf.data() + c * s.plane + (y + p) * s.wp + p;
        std::copy(src, src + g.w, dst + y * g.w);
      }
    }
  }
  for (std::size_t o = 0; o < g.co; ++o) {
    for (std::size_t c = 0; c < g.c; ++c) {
      T* dst = grads.weight.data() + (o * g.c + c) * kk;
      for (std::size_t t = 0; t < kk; ++t) {
        dst[t] = gtaps[t](static_cast<Eigen::Index>(o), static_cast<Eigen::Index>(c));
      }
    }
  }
}

}  // namespace

template <typename T>
Tensor<T> conv2d_forward(const Tensor<T>& input, const Tensor<T>& weight, const Tensor<T>& bias,
                         int stride, int padding) {
  const auto g = conv_geometry(input, weight, stride, padding);
  if (bias.size() != g.co) {
    throw ShapeError(fmt::format("conv2d bias {} does not match {} output channels",
                                 shape_string(bias.shape()), g.co));
  }
  Tensor<T> out({g.n, g.co, g.ho, g.wo});
  if (is_same_conv(g)) {
    same_conv_forward(input, weight, bias, g, out);
    return out;
  }
  std::vector<T> cols(g.patch() * g.out_pixels());
  const ConstMatMap<T> w(weight.data(), static_cast<Eigen::Index>(g.co),
                         static_cast<Eigen::Index>(g.patch()));
  const Eigen::Map<const Eigen::Matrix<T, Eigen::Dynamic, 1>> b(bias.data(),
                                                                 static_cast<Eigen::Index>(g.co));
  for (std::size_t n = 0; n < g.n; ++n) {
    im2col(input.data() + n * g.c * g.h * g.w, g, cols.data());
    const ConstMatMap<T> col_mat(cols.data(), static_cast<Eigen::Index>(g.patch()),
                                 static_cast<Eigen::Index>(g.out_pixels()));
    MatMap<T> o(out.data() + n * g.co * g.out_pixels(), static_cast<Eigen::Index>(g.co),
                static_cast<Eigen::Index>(g.out_pixels()));
    o.noalias() = w * col_mat;
    o.colwise() += b;
  }
  return out;
}

template <typename T>
Conv2dGrads<T> conv2d_backward(const Tensor<T>& input, const Tensor<T>& weight,
                               const Tensor<T>& grad_output, int stride, int padding,
                               bool need_input_grad) {
  const auto g = conv_geometry(input, weight, stride, padding);
  if (grad_output.shape() != Shape{g.n, g.co, g.ho, g.wo}) {
    throw ShapeError(fmt::format("conv2d grad_output {} does not match output [{},{},{},{}]",
                                 shape_string(grad_output.shape()), g.n, g.co, g.ho, g.wo));
  }
  Conv2dGrads<T> grads;
  grads.weight = Tensor<T>(weight.shape());
  grads.bias = Tensor<T>({g.co});
  if (need_input_grad) grads.input = Tensor<T>(input.shape());
  if (is_same_conv(g)) {
    same_conv_backward(input, weight, grad_output, g, grads, need_input_grad);
    bias_grad(grad_output, g, grads.bias);
    return grads;
  }

  const auto co = static_cast<Eigen::Index>(g.co);
  const auto patch = static_cast<Eigen::Index>(g.patch());
  const auto pixels = static_cast<Eigen::Index>(g.out_pixels());
  std::vector<T> cols(g.patch() * g.out_pixels());
  std::vector<T> grad_cols(need_input_grad ? cols.size() : 0);
  const ConstMatMap<T> w(weight.data(), co, patch);
  MatMap<T> gw(grads.weight.data(), co, patch);

  for (std::size_t n = 0; n < g.n; ++n) {
    const ConstMatMap<T> go(grad_output.data() + n * g.co * g.out_pixels(), co, pixels);
    im2col(input.data() + n * g.c * g.h * g.w, g, cols.data());
    const ConstMatMap<T> col_mat(cols.data(), patch, pixels);
    gw.noalias() += go * col_mat.transpose();
    if (need_input_grad) {
      MatMap<T> gc(grad_cols.data(), patch, pixels);
      gc.noalias() = w.transpose() * go;
      col2im_add(grad_cols.data(), g, grads.input.data() + n * g.c * g.h * g.w);
    }
  }
  bias_grad(grad_output, g, grads.bias);
  return grads;
}

template <typename T>
Tensor<T> relu(const Tensor<T>& x) {
  Tensor<T> y(x.shape());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] > T{0} ? x[i] : T{0};
  return y;
}

template <typename T>
Tensor<T> relu_backward(const Tensor<T>& pre, const Tensor<T>& grad) {
  if (pre.shape() != grad.shape()) throw ShapeError("relu_backward shape mismatch");
  Tensor<T> out(grad.shape());
  for (std::size_t i = 0; i < grad.size(); ++i) out[i] = pre[i] > T{0} ? grad[i] : T{0};
  return out;
}

template <typename T>
Tensor<T> global_avg_pool(const Tensor<T>& x) {
  if (x.rank() != 4) throw ShapeError("global_avg_pool expects [N,C,H,W]");
  const std::size_t n = x.dim(0), c = x.dim(1), hw = x.dim(2) * x.dim(3);
  Tensor<T> out({n, c});
  for (std::size_t i = 0; i < n * c; ++i) {
    Acc<T> s{0};
    const T* p = x.data() + i * hw;
    for (std::size_t j = 0; j < hw; ++j) s += p[j];
    out[i] = static_cast<T>(s / static_cast<Acc<T>>(hw));
  }
  return out;
}

template <typename T>
Tensor<T> global_avg_pool_backward(const Tensor<T>& grad, std::size_t height, std::size_t width) {
  if (grad.rank() != 2) throw ShapeError("global_avg_pool_backward expects [N,C]");
  const std::size_t hw = height * width;
  Tensor<T> out({grad.dim(0), grad.dim(1), height, width});
  for (std::size_t i = 0; i < grad.size(); ++i) {
    const T v = grad[i] / static_cast<T>(hw);
    std::fill(out.data() + i * hw, out.data() + (i + 1) * hw, v);
  }
  return out;
}

template <typename T>
Tensor<T> linear_forward(const Tensor<T>& x, const Tensor<T>& weight, const Tensor<T>& bias) {
  if (x.rank() != 2 || weight.rank() != 2 || weight.dim(1) != x.dim(1) ||
      bias.size() != weight.dim(0)) {
    throw ShapeError(fmt::format("linear shape mismatch: x {}, weight {}, bias {}",
                                 shape_string(x.shape()), shape_string(weight.shape()),
                                 shape_string(bias.shape())));
  }
  const std::size_t n = x.dim(0), c = x.dim(1), k = weight.dim(0);
  Tensor<T> out({n, k});
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      Acc<T> s = bias[j];
      for (std::size_t q = 0; q < c; ++q) {
        s += static_cast<Acc<T>>(weight[j * c + q]) * static_cast<Acc<T>>(x[i * c + q]);
      }
      out[i * k + j] = static_cast<T>(s);
    }
  }
  return out;
}

template <typename T>
LinearGrads<T> linear_backward(const Tensor<T>& x, const Tensor<T>& weight,
                               const Tensor<T>& grad_output) {
  const std::size_t n = x.dim(0), c = x.dim(1), k = weight.dim(0);
  if (grad_output.shape() != Shape{n, k}) throw ShapeError("linear_backward shape mismatch");
  LinearGrads<T> g{Tensor<T>({n, c}), Tensor<T>(weight.shape()), Tensor<T>({k})};
  for (std::size_t j = 0; j < k; ++j) {
    Acc<T> b{0};
    for (std::size_t i = 0; i < n; ++i) b += grad_output[i * k + j];
    g.bias[j] = static_cast<T>(b);
    for (std::size_t q = 0; q < c; ++q) {
      Acc<T> s{0};
      for (std::size_t i = 0; i < n; ++i) {
        s += static_cast<Acc<T>>(grad_output[i * k + j]) * static_cast<Acc<T>>(x[i * c + q]);
      }
      g.weight[j * c + q] = static_cast<T>(s);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t q = 0; q < c; ++q) {
      Acc<T> s{0};
      for (std::size_t j = 0; j < k; ++j) {
        s += static_cast<Acc<T>>(grad_output[i * k + j]) * static_cast<Acc<T>>(weight[j * c + q]);
      }
      g.input[i * c + q] = static_cast<T>(s);
    }
  }
  return g;
}

template <typename T>
Tensor<T> softmax(const Tensor<T>& logits) {
  if (logits.rank() != 2) throw ShapeError("softmax expects [N,K]");
  const std::size_t n = logits.dim(0), k = logits.dim(1);
  Tensor<T> out(logits.shape());
  for (std::size_t i = 0; i < n; ++i) {
    const T* z = logits.data() + i * k;
    const double m = *std::max_element(z, z + k);
    double total = 0.0;
    for (std::size_t j = 0; j < k; ++j) total += std::exp(static_cast<double>(z[j]) - m);
    for (std::size_t j = 0; j < k; ++j) {
      out[i * k + j] = static_cast<T>(std::exp(static_cast<double>(z[j]) - m) / total);
    }
  }
  return out;
}

template <typename T>
CrossEntropy<T> cross_entropy(const Tensor<T>& logits, std::span<const int> labels) {
  if (logits.rank() != 2 || logits.dim(0) != labels.size()) {
    throw ShapeError(fmt::format("cross_entropy: logits {} vs {} labels",
                                 shape_string(logits.shape()), labels.size()));
  }
  const std::size_t n = logits.dim(0), k = logits.dim(1);
  for (const int y : labels) {
    if (y < 0 || static_cast<std::size_t>(y) >= k) {
      throw InvalidInput(fmt::format("label {} outside [0, {})", y, k));
    }
  }
  CrossEntropy<T> ce;
  ce.grad = Tensor<T>(logits.shape());
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const T* z = logits.data() + i * k;
    const double m = *std::max_element(z, z + k);
    double sum = 0.0;
    for (std::size_t j = 0; j < k; ++j) sum += std::exp(static_cast<double>(z[j]) - m);
    const double log_sum = m + std::log(sum);
    total += log_sum - static_cast<double>(z[labels[i]]);
    for (std::size_t j = 0; j < k; ++j) {
      const double p = std::exp(static_cast<double>(z[j]) - log_sum);
      const double target = static_cast<std::size_t>(labels[i]) == j ? 1.0 : 0.0;
      ce.grad[i * k + j] = static_cast<T>((p - target) / static_cast<double>(n));
    }
  }
  ce.loss = total / static_cast<double>(n);
  return ce;
}

#define SPECTROCAM_INSTANTIATE_LAYERS(T)                                                        \
  template Tensor<T> conv2d_forward(const Tensor<T>&, const Tensor<T>&, const Tensor<T>&, int,  \
                                    int);                                                       \
  template Conv2dGrads<T> conv2d_backward(const Tensor<T>&, const Tensor<T>&, const Tensor<T>&, \
                                          int, int, bool);                                      \
  template Tensor<T> relu(const Tensor<T>&);                                                    \
  template Tensor<T> relu_backward(const Tensor<T>&, const Tensor<T>&);                         \
  template Tensor<T> global_avg_pool(const Tensor<T>&);                                         \
  template Tensor<T> global_avg_pool_backward(const Tensor<T>&, std::size_t, std::size_t);      \
  template Tensor<T> linear_forward(const Tensor<T>&, const Tensor<T>&, const Tensor<T>&);      \
  template LinearGrads<T> linear_backward(const Tensor<T>&, const Tensor<T>&, const Tensor<T>&); \
  template Tensor<T> softmax(const Tensor<T>&);                                                 \
  template CrossEntropy<T> cross_entropy(const Tensor<T>&, std::span<const int>);

SPECTROCAM_INSTANTIATE_LAYERS(float)
SPECTROCAM_INSTANTIATE_LAYERS(double)

#undef SPECTROCAM_INSTANTIATE_LAYERS

}  // namespace spectrocam::layers
