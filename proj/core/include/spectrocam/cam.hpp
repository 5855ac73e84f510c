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

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "spectrocam/array2d.hpp"
#include "spectrocam/network.hpp"
#include "spectrocam/pipeline.hpp"
#include "spectrocam/signal.hpp"
#include "spectrocam/tensor.hpp"

namespace spectrocam {

// Class activation map for one input and one class.
//   raw        - fc-weighted sum of final feature maps, [h x w]
//   normalized - raw min-max scaled to [0, 1]; all zeros for a constant map
//   upsampled  - normalized, bilinearly resized to the spectrogram grid
// mean(raw) equals logit - fc_bias[class_id] up to rounding.
struct CamMap {
  Array2D<double> raw;
  Array2D<double> normalized;
  Array2D<double> upsampled;
  int class_id = 0;
  double logit = 0.0;
};

// raw(y, x) = sum_c fc_weights(class_id, c) * features(c, y, x).
// features is [C,h,w] or [1,C,h,w]; fc_weights is [K,C].
template <typename T>
Array2D<double> compute_cam(const Tensor<T>& features, const Tensor<T>& fc_weights, int class_id);

Array2D<double> normalize_cam(const Array2D<double>& raw);

// Resizes to [n_bins x n_frames] of `spec`.
Array2D<double> upsample_cam(const Array2D<double>& normalized, const Spectrogram& spec);

// Runs the network on one clip and builds the map for class_id (or the
// predicted class when class_id < 0). Also returns the capped spectrogram
// the map was upsampled to.
struct ClipExplanation {
  Spectrogram spectrogram;
  CamMap cam;
  Array2D<double> image_cam;  // normalized map at network input resolution
  int predicted = 0;
  std::vector<double> logits;
};

ClipExplanation explain_clip(const Network<float>& net, const SpectroPipeline& pipeline,
                             const AudioClip& clip, int class_id = -1);

// Normalized map for class_id of every image in `images` [N,1,H,W], resized
// to the input resolution. Maps are returned in input order.
std::vector<Array2D<double>> image_cams(const Network<float>& net, const Tensor<float>& images,
                                        std::span<const int> class_ids,
                                        std::size_t batch_size = 64);

// Mean of the normalized maps of every item whose true label is class_id,
// each map taken for its own true class, at input resolution.
struct ClassMeanCam {
  int class_id = 0;
  std::size_t count = 0;
  Array2D<double> mean;
};

std::vector<ClassMeanCam> class_mean_cams(const Network<float>& net, const Tensor<float>& images,
                                          std::span<const int> labels, int n_classes);

// Frequency step between rows of a network input image built by `pipeline`
// from audio at sample_rate. Row 0 is 0 Hz.
double image_hz_per_row(const SpectroPipeline& pipeline, int sample_rate);

// ---------------------------------------------------------------------------
// Rendering

struct RgbImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> pixels;  // RGB interleaved, row-major, top row first

  std::array<std::uint8_t, 3> at(std::size_t x, std::size_t y) const {
    const std::size_t i = 3 * (y * width + x);
    return {pixels[i], pixels[i + 1], pixels[i + 2]};
  }
};

// Five-stop ramp for v in [0, 1]: blue (0,0,255) at 0, cyan (0,255,255) at
// 0.25, green (0,255,0) at 0.5, yellow (255,255,0) at 0.75, red (255,0,0) at
// 1. Linear between stops; v is clamped. Channels in [0, 255].
std::array<double, 3> heat_ramp(double v);

// Spectrogram as grayscale (dB min-max mapped) blended with heat_ramp(cam):
// out = (1 - alpha) * gray + alpha * ramp. Low frequencies at the bottom.
RgbImage overlay(const Spectrogram& spec, const Array2D<double>& cam_full, double alpha);

// A map in [0, 1] drawn with heat_ramp alone, row 0 at the bottom.
RgbImage render_heatmap(const Array2D<double>& map);

// Nearest-neighbour enlargement by an integer factor.
RgbImage scale_nearest(const RgbImage& image, std::size_t factor);

std::string encode_png(const RgbImage& image);
void write_png(const std::string& path, const RgbImage& image);

// ---------------------------------------------------------------------------
// Frequency importance

struct Band {
  double low = 0.0;
  double high = 0.0;
  friend bool operator==(const Band&, const Band&) = default;
};

struct BandImportance {
  Band band;
  double importance = 0.0;
  bool empty = false;  // no row center fell inside the band
};

struct FrequencyImportance {
  std::vector<BandImportance> bands;
  Band peak_band;
};

// 0-700, 700-1500, 1500-2500, 2500-4000 and 4000-f_max Hz, truncated at f_max.
std::vector<Band> default_bands(double f_max);

// Parses "0-700,700-1500,..." into bands.
std::vector<Band> parse_bands(std::string_view text);

// Row r of cam_full sits at r * hz_per_row. Bands are half-open [low, high)
// except the last, which is closed. They must start at 0, be contiguous, and
// cover every row.
FrequencyImportance frequency_profile(const Array2D<double>& cam_full, double hz_per_row,
                                      const std::vector<Band>& bands);

std::string format_profile_csv(const FrequencyImportance& profile);

}  // namespace spectrocam
