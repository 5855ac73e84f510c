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

#include "spectrocam/signal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>
#include <unsupported/Eigen/FFT>

#include "spectrocam/error.hpp"

namespace spectrocam {

void AudioClip::validate() const {
  if (samples.empty()) throw InvalidInput("audio clip has no samples");
  if (sample_rate <= 0) throw InvalidInput(fmt::format("invalid sample rate {}", sample_rate));
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double s = samples[i];
    if (!std::isfinite(s) || s < -1.0 || s > 1.0) {
      throw InvalidInput(fmt::format("sample {} out of range: {}", i, s));
    }
  }
}

void StftParams::validate() const {
  if (fft_size < 2 || (fft_size & (fft_size - 1)) != 0) {
    throw InvalidInput(fmt::format("fft_size must be a power of two, got {}", fft_size));
  }
  if (hop < 1 || hop > window_len || window_len > fft_size) {
    throw InvalidInput(fmt::format("need 0 < hop <= window_len <= fft_size, got {} / {} / {}",
                                   hop, window_len, fft_size));
  }
  if (!(db_floor < 0.0) || !std::isfinite(db_floor)) {
    throw InvalidInput(fmt::format("db_floor must be negative, got {}", db_floor));
  }
}

std::vector<double> hann_window(int length) {
  std::vector<double> w(static_cast<std::size_t>(length));
  for (int n = 0; n < length; ++n) {
    w[n] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * n / length);
  }
  return w;
}

std::size_t stft_frame_count(std::size_t n_samples, const StftParams& params) {
  const auto win = static_cast<std::size_t>(params.window_len);
  if (n_samples <= win) return 1;
  return 1 + (n_samples - win) / static_cast<std::size_t>(params.hop);
}

Array2D<std::complex<double>> stft(const AudioClip& clip, const StftParams& params) {
  params.validate();
  clip.validate();

  const std::size_t n_frames = stft_frame_count(clip.samples.size(), params);
  const std::size_t n_bins = params.n_bins();
  const auto window = hann_window(params.window_len);

  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::HalfSpectrum);
  std::vector<double> frame(static_cast<std::size_t>(params.fft_size));
  std::vector<std::complex<double>> spectrum;

  Array2D<std::complex<double>> out(n_bins, n_frames);
  for (std::size_t t = 0; t < n_frames; ++t) {
    std::fill(frame.begin(), frame.end(), 0.0);
    const std::size_t start = t * static_cast<std::size_t>(params.hop);
    for (int n = 0; n < params.window_len; ++n) {
      const std::size_t idx = start + static_cast<std::size_t>(n);
      if (idx < clip.samples.size()) frame[n] = clip.samples[idx] * window[n];
    }
    fft.fwd(spectrum, frame);
    for (std::size_t k = 0; k < n_bins; ++k) out(k, t) = spectrum[k];
  }
  return out;
}

Spectrogram log_spectrogram(const AudioClip& clip, const StftParams& params) {
  const auto complex_spec = stft(clip, params);
  Spectrogram spec;
  spec.sample_rate = clip.sample_rate;
  spec.params = params;
  spec.values = Array2D<double>(complex_spec.rows(), complex_spec.cols());
  for (std::size_t i = 0; i < complex_spec.size(); ++i) {
    const double db = 20.0 * std::log10(std::abs(complex_spec.data()[i]) + kMagnitudeEpsilon);
    spec.values.data()[i] = std::max(db, params.db_floor);
  }
  return spec;
}

std::size_t capped_bin_count(int sample_rate, int fft_size, double f_max) {
  if (!(f_max > 0.0) || f_max > sample_rate / 2.0) {
    throw InvalidInput(
        fmt::format("f_max must lie in (0, {}] Hz, got {}", sample_rate / 2.0, f_max));
  }
  auto last = static_cast<std::size_t>(std::floor(f_max * fft_size / sample_rate));
  // Guard the floor against rounding in either direction.
  while (static_cast<double>(last) * sample_rate / fft_size > f_max) --last;
  while (static_cast<double>(last + 1) * sample_rate / fft_size <= f_max) ++last;
  return last + 1;
}

Spectrogram cap_frequency(const Spectrogram& spec, double f_max) {
  const std::size_t keep =
      std::min(capped_bin_count(spec.sample_rate, spec.params.fft_size, f_max), spec.n_bins());
  Spectrogram out;
  out.sample_rate = spec.sample_rate;
  out.params = spec.params;
  const std::size_t cols = spec.n_frames();
  std::vector<double> data(spec.values.data().begin(),
                           spec.values.data().begin() + static_cast<std::ptrdiff_t>(keep * cols));
  out.values = Array2D<double>(keep, cols, std::move(data));
  return out;
}

}  // namespace spectrocam
