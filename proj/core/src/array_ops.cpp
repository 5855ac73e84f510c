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

#include <algorithm>
#include <cmath>

#include "spectrocam/error.hpp"
#include "spectrocam/signal.hpp"

namespace spectrocam {
namespace {

struct Tap {
  std::size_t lo;
  std::size_t hi;
  double frac;
};

std::vector<Tap> corner_aligned_taps(std::size_t in, std::size_t out) {
  std::vector<Tap> taps(out);
  for (std::size_t i = 0; i < out; ++i) {
    if (out == 1 || in == 1) {
      taps[i] = {0, 0, 0.0};
      continue;
    }
    const double pos = static_cast<double>(i) * static_cast<double>(in - 1) /
                       static_cast<double>(out - 1);
    auto lo = static_cast<std::size_t>(std::floor(pos));
    lo = std::min(lo, in - 1);
    const std::size_t hi = std::min(lo + 1, in - 1);
    taps[i] = {lo, hi, pos - static_cast<double>(lo)};
  }
  return taps;
}

}  // namespace

Array2D<double> resize_bilinear(const Array2D<double>& values, std::size_t out_h,
                                std::size_t out_w) {
  if (values.empty()) throw InvalidInput("resize_bilinear: empty input");
  if (out_h == 0 || out_w == 0) throw InvalidInput("resize_bilinear: zero output extent");
  if (out_h == values.rows() && out_w == values.cols()) return values;

  const auto row_taps = corner_aligned_taps(values.rows(), out_h);
  const auto col_taps = corner_aligned_taps(values.cols(), out_w);

  Array2D<double> out(out_h, out_w);
  for (std::size_t y = 0; y < out_h; ++y) {
    const Tap& ry = row_taps[y];
    for (std::size_t x = 0; x < out_w; ++x) {
      const Tap& cx = col_taps[x];
      const double top = values(ry.lo, cx.lo) + cx.frac * (values(ry.lo, cx.hi) - values(ry.lo, cx.lo));
      const double bottom = values(ry.hi, cx.lo) + cx.frac * (values(ry.hi, cx.hi) - values(ry.hi, cx.lo));
      const double v = top + ry.frac * (bottom - top);
      // Interpolation is convex; clamping removes last-ulp overshoot.
      const auto [lo, hi] = std::minmax({values(ry.lo, cx.lo), values(ry.lo, cx.hi),
                                         values(ry.hi, cx.lo), values(ry.hi, cx.hi)});
      out(y, x) = std::clamp(v, lo, hi);
    }
  }
  return out;
}

}  // namespace spectrocam
