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

#include "spectrocam/cam.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "spectrocam/error.hpp"
#include "spectrocam/keyvalue.hpp"

namespace spectrocam {

template <typename T>
Array2D<double> compute_cam(const Tensor<T>& features, const Tensor<T>& fc_weights, int class_id) {
  const bool batched = features.rank() == 4;
  if (!(features.rank() == 3 || (batched && features.dim(0) == 1))) {
    throw ShapeError(fmt::format("compute_cam expects [C,h,w] features, got {}",
                                 shape_string(features.shape())));
  }
  const std::size_t off = batched ? 1 : 0;
  const std::size_t c = features.dim(off), h = features.dim(off + 1), w = features.dim(off + 2);
  if (fc_weights.rank() != 2 || fc_weights.dim(1) != c) {
    throw ShapeError(fmt::format("fc weights {} do not match {} feature channels",
                                 shape_string(fc_weights.shape()), c));
  }
  if (class_id < 0 || static_cast<std::size_t>(class_id) >= fc_weights.dim(0)) {
    throw InvalidInput(fmt::format("class {} outside [0, {})", class_id, fc_weights.dim(0)));
  }
  Array2D<double> raw(h, w, 0.0);
  const T* wrow = fc_weights.data() + static_cast<std::size_t>(class_id) * c;
  for (std::size_t ch = 0; ch < c; ++ch) {
    const double weight = wrow[ch];
    const T* plane = features.data() + ch * h * w;
    for (std::size_t i = 0; i < h * w; ++i) raw.data()[i] += weight * static_cast<double>(plane[i]);
  }
  return raw;
}

template Array2D<double> compute_cam(const Tensor<float>&, const Tensor<float>&, int);
template Array2D<double> compute_cam(const Tensor<double>&, const Tensor<double>&, int);

Array2D<double> normalize_cam(const Array2D<double>& raw) {
  Array2D<double> out(raw.rows(), raw.cols(), 0.0);
  if (raw.empty()) return out;
  const double lo = min_value(raw);
  const double hi = max_value(raw);
  if (!(hi > lo)) return out;
  const double range = hi - lo;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    out.data()[i] = std::clamp((raw.data()[i] - lo) / range, 0.0, 1.0);
  }
  return out;
}

Array2D<double> upsample_cam(const Array2D<double>& normalized, const Spectrogram& spec) {
  if (spec.values.empty()) throw InvalidInput("upsample_cam: empty spectrogram");
  return resize_bilinear(normalized, spec.n_bins(), spec.n_frames());
}

ClipExplanation explain_clip(const Network<float>& net, const SpectroPipeline& pipeline,
                             const AudioClip& clip, int class_id) {
  ClipExplanation out;
  out.spectrogram = pipeline.spectrogram(clip);
  const auto img = pipeline.image(out.spectrogram);
  Tensor<float> batch({1, 1, img.rows(), img.cols()});
  std::copy(img.data().begin(), img.data().end(), batch.data());
  const auto fwd = net.forward(batch);

  const std::size_t k = fwd.logits.dim(1);
  out.logits.assign(fwd.logits.data(), fwd.logits.data() + k);
  out.predicted = static_cast<int>(std::max_element(out.logits.begin(), out.logits.end()) -
                                   out.logits.begin());
  const int target = class_id < 0 ? out.predicted : class_id;

  out.cam.raw = compute_cam(fwd.features, net.fc_weight(), target);
  out.cam.class_id = target;
  out.cam.logit = out.logits[static_cast<std::size_t>(target)];
  out.cam.normalized = normalize_cam(out.cam.raw);
  out.cam.upsampled = upsample_cam(out.cam.normalized, out.spectrogram);
  out.image_cam = resize_bilinear(out.cam.normalized, img.rows(), img.cols());
  return out;
}

std::vector<Array2D<double>> image_cams(const Network<float>& net, const Tensor<float>& images,
                                        std::span<const int> class_ids, std::size_t batch_size) {
  if (images.rank() != 4 || images.dim(0) != class_ids.size()) {
    throw ShapeError(fmt::format("image_cams: {} images for {} class ids",
                                 shape_string(images.shape()), class_ids.size()));
  }
  const std::size_t n = images.dim(0);
  const std::size_t h = images.dim(2), w = images.dim(3);
  const std::size_t plane = images.dim(1) * h * w;
  batch_size = std::max<std::size_t>(batch_size, 1);
  std::vector<Array2D<double>> out;
  out.reserve(n);
  for (std::size_t start = 0; start < n; start += batch_size) {
    const std::size_t count = std::min(batch_size, n - start);
    Tensor<float> batch({count, images.dim(1), h, w});
    std::copy_n(images.data() + start * plane, count * plane, batch.data());
    const auto fwd = net.forward(batch);
    const std::size_t c = fwd.features.dim(1), fh = fwd.features.dim(2), fw = fwd.features.dim(3);
    for (std::size_t i = 0; i < count; ++i) {
      const float* first = fwd.features.data() + i * c * fh * fw;
      Tensor<float> features({c, fh, fw}, std::vector<float>(first, first + c * fh * fw));
      const auto raw = compute_cam(features, net.fc_weight(), class_ids[start + i]);
      out.push_back(resize_bilinear(normalize_cam(raw), h, w));
    }
  }
  return out;
}

std::vector<ClassMeanCam> class_mean_cams(const Network<float>& net, const Tensor<float>& images,
                                          std::span<const int> labels, int n_classes) {
  const auto maps = image_cams(net, images, labels);
  std::vector<ClassMeanCam> out(static_cast<std::size_t>(n_classes));
  for (int k = 0; k < n_classes; ++k) {
    out[static_cast<std::size_t>(k)].class_id = k;
    out[static_cast<std::size_t>(k)].mean = Array2D<double>(images.dim(2), images.dim(3), 0.0);
  }
  for (std::size_t i = 0; i < maps.size(); ++i) {
    if (labels[i] < 0 || labels[i] >= n_classes) {
      throw InvalidInput(fmt::format("label {} outside [0, {})", labels[i], n_classes));
    }
    auto& acc = out[static_cast<std::size_t>(labels[i])];
    for (std::size_t j = 0; j < maps[i].size(); ++j) acc.mean.data()[j] += maps[i].data()[j];
    ++acc.count;
  }
  for (auto& acc : out) {
    if (acc.count == 0) continue;
    for (auto& v : acc.mean.data()) v /= static_cast<double>(acc.count);
  }
  return out;
}

double image_hz_per_row(const SpectroPipeline& pipeline, int sample_rate) {
  const std::size_t rows = capped_bin_count(sample_rate, pipeline.stft.fft_size, pipeline.f_max);
  const double bin_hz = static_cast<double>(sample_rate) / pipeline.stft.fft_size;
  if (pipeline.image_h < 2) return 0.0;
  return bin_hz * static_cast<double>(rows - 1) / static_cast<double>(pipeline.image_h - 1);
}

std::array<double, 3> heat_ramp(double v) {
  static constexpr std::array<std::array<double, 3>, 5> kStops{{
      {0.0, 0.0, 255.0},
      {0.0, 255.0, 255.0},
      {0.0, 255.0, 0.0},
      {255.0, 255.0, 0.0},
      {255.0, 0.0, 0.0},
  }};
  v = std::isfinite(v) ? std::clamp(v, 0.0, 1.0) : 0.0;
  const double pos = v * 4.0;
  const auto seg = std::min<std::size_t>(static_cast<std::size_t>(pos), 3);
  const double t = pos - static_cast<double>(seg);
  std::array<double, 3> out{};
  for (std::size_t ch = 0; ch < 3; ++ch) {
    out[ch] = kStops[seg][ch] + t * (kStops[seg + 1][ch] - kStops[seg][ch]);
  }
  return out;
}

RgbImage overlay(const Spectrogram& spec, const Array2D<double>& cam_full, double alpha) {
  if (cam_full.rows() != spec.n_bins() || cam_full.cols() != spec.n_frames()) {
    throw ShapeError(fmt::format("overlay: cam {}x{} vs spectrogram {}x{}", cam_full.rows(),
                                 cam_full.cols(), spec.n_bins(), spec.n_frames()));
  }
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw InvalidInput("overlay alpha must lie in [0, 1]");

  const double lo = min_value(spec.values);
  const double hi = max_value(spec.values);
  const double range = hi > lo ? hi - lo : 0.0;

  RgbImage img;
  img.width = spec.n_frames();
  img.height = spec.n_bins();
  img.pixels.resize(3 * img.width * img.height);
  for (std::size_t y = 0; y < img.height; ++y) {
    const std::size_t bin = img.height - 1 - y;
    for (std::size_t x = 0; x < img.width; ++x) {
      const double gray = range > 0.0 ? 255.0 * (spec.values(bin, x) - lo) / range : 0.0;
      const auto heat = heat_ramp(cam_full(bin, x));
      for (std::size_t ch = 0; ch < 3; ++ch) {
        const double v = (1.0 - alpha) * gray + alpha * heat[ch];
        img.pixels[3 * (y * img.width + x) + ch] =
            static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
      }
    }
  }
  return img;
}

RgbImage render_heatmap(const Array2D<double>& map) {
  RgbImage img;
  img.width = map.cols();
  img.height = map.rows();
  img.pixels.resize(3 * img.width * img.height);
  for (std::size_t y = 0; y < img.height; ++y) {
    for (std::size_t x = 0; x < img.width; ++x) {
      const auto heat = heat_ramp(map(img.height - 1 - y, x));
      for (std::size_t ch = 0; ch < 3; ++ch) {
        img.pixels[3 * (y * img.width + x) + ch] = static_cast<std::uint8_t>(std::lround(heat[ch]));
      }
    }
  }
  return img;
}

RgbImage scale_nearest(const RgbImage& image, std::size_t factor) {
  if (factor <= 1) return image;
  RgbImage out;
  out.width = image.width * factor;
  out.height = image.height * factor;
  out.pixels.resize(3 * out.width * out.height);
  for (std::size_t y = 0; y < out.height; ++y) {
    for (std::size_t x = 0; x < out.width; ++x) {
      const std::size_t src = 3 * ((y / factor) * image.width + x / factor);
      std::copy_n(image.pixels.begin() + static_cast<std::ptrdiff_t>(src), 3,
                  out.pixels.begin() + static_cast<std::ptrdiff_t>(3 * (y * out.width + x)));
    }
  }
  return out;
}

std::vector<Band> default_bands(double f_max) {
  static constexpr std::array<double, 5> kEdges{0.0, 700.0, 1500.0, 2500.0, 4000.0};
  std::vector<Band> bands;
  for (std::size_t i = 0; i + 1 < kEdges.size() && kEdges[i] < f_max; ++i) {
    bands.push_back({kEdges[i], std::min(kEdges[i + 1], f_max)});
  }
  if (f_max > kEdges.back()) bands.push_back({kEdges.back(), f_max});
  return bands;
}

std::vector<Band> parse_bands(std::string_view text) {
  std::vector<Band> bands;
  for (const auto& item : split_list(text)) {
    const auto dash = item.find('-');
    if (dash == std::string::npos) {
      throw InvalidInput(fmt::format("band `{}` is not `low-high`", item));
    }
    bands.push_back({parse_double(item.substr(0, dash)), parse_double(item.substr(dash + 1))});
  }
  if (bands.empty()) throw InvalidInput("no frequency bands given");
  return bands;
}

FrequencyImportance frequency_profile(const Array2D<double>& cam_full, double hz_per_row,
                                      const std::vector<Band>& bands) {
  if (cam_full.empty()) throw InvalidInput("frequency_profile: empty map");
  if (bands.empty() || bands.front().low != 0.0) {
    throw InvalidInput("frequency bands must start at 0 Hz");
  }
  for (std::size_t i = 0; i < bands.size(); ++i) {
    if (!(bands[i].high > bands[i].low)) throw InvalidInput("every band needs high > low");
    if (i > 0 && bands[i].low != bands[i - 1].high) throw InvalidInput("bands must be contiguous");
  }
  const double top = static_cast<double>(cam_full.rows() - 1) * hz_per_row;
  if (bands.back().high < top - 1e-9) {
    throw InvalidInput(fmt::format("bands end at {} Hz but the map reaches {} Hz",
                                   bands.back().high, top));
  }

  FrequencyImportance out;
  std::size_t best = 0;
  for (std::size_t i = 0; i < bands.size(); ++i) {
    const Band& band = bands[i];
    const bool last = i + 1 == bands.size();
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t r = 0; r < cam_full.rows(); ++r) {
      const double f = static_cast<double>(r) * hz_per_row;
      if (f < band.low || (last ? f > band.high : f >= band.high)) continue;
      for (const double v : cam_full.row(r)) sum += v;
      count += cam_full.cols();
    }
    BandImportance bi{band, count ? sum / static_cast<double>(count) : 0.0, count == 0};
    out.bands.push_back(bi);
    if (bi.importance > out.bands[best].importance) best = i;
  }
  out.peak_band = out.bands[best].band;
  return out;
}

std::string format_profile_csv(const FrequencyImportance& profile) {
  std::string out = fmt::format("# peak_band = {}-{}\n", format_double(profile.peak_band.low),
                                format_double(profile.peak_band.high));
  out += "band_low_hz,band_high_hz,mean_importance\n";
  for (const auto& b : profile.bands) {
    out += fmt::format("{},{},{}\n", format_double(b.band.low), format_double(b.band.high),
                       format_double(b.importance));
  }
  return out;
}

}  // namespace spectrocam
