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

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "spectrocam/array2d.hpp"

namespace spectrocam {

// Mono audio buffer with its sampling rate and class label.
struct AudioClip {
  std::vector<double> samples;
  int sample_rate = 22050;
  std::string label;
  std::string source_id;

  double duration() const { return static_cast<double>(samples.size()) / sample_rate; }

  // Throws InvalidInput unless samples are nonempty, finite, within [-1, 1]
  // and the rate is positive.
  void validate() const;
};

// Hann-windowed STFT settings. window_len samples are windowed and
// zero-padded to fft_size before the transform.
struct StftParams {
  int fft_size = 512;
  int window_len = 512;
  int hop = 128;
  double db_floor = -80.0;

  void validate() const;
  std::size_t n_bins() const { return static_cast<std::size_t>(fft_size) / 2 + 1; }
};

// Added to |X| before taking the logarithm.
inline constexpr double kMagnitudeEpsilon = 1e-10;

// Log-magnitude spectrogram. values(bin, frame) is in dB; row 0 is 0 Hz.
struct Spectrogram {
  Array2D<double> values;
  int sample_rate = 0;
  StftParams params;

  std::size_t n_bins() const { return values.rows(); }
  std::size_t n_frames() const { return values.cols(); }
  double bin_hz() const { return static_cast<double>(sample_rate) / params.fft_size; }
  double freq_of_bin(std::size_t bin) const {
    return static_cast<double>(bin) * sample_rate / params.fft_size;
  }
  double time_of_frame(std::size_t frame) const {
    return static_cast<double>(frame) * params.hop / sample_rate;
  }
  double nyquist() const { return sample_rate / 2.0; }
};

// Periodic Hann window of the given length.
std::vector<double> hann_window(int length);

// Number of analysis frames for n samples. Clips shorter than one window
// are zero-padded to a single frame.
std::size_t stft_frame_count(std::size_t n_samples, const StftParams& params);

// Complex STFT, [fft_size/2 + 1 bins x n_frames]. Frame t covers samples
// [t*hop, t*hop + window_len).
Array2D<std::complex<double>> stft(const AudioClip& clip, const StftParams& params);

// max(20 log10(|X| + kMagnitudeEpsilon), db_floor).
Spectrogram log_spectrogram(const AudioClip& clip, const StftParams& params);

// Keeps the rows whose center frequency is <= f_max. Requires
// 0 < f_max <= sample_rate / 2.
Spectrogram cap_frequency(const Spectrogram& spec, double f_max);

// Number of rows cap_frequency retains for the given STFT geometry.
std::size_t capped_bin_count(int sample_rate, int fft_size, double f_max);

// Corner-aligned bilinear interpolation: output index i samples the input at
// i * (in - 1) / (out - 1). A single output row or column samples input
// index 0.
Array2D<double> resize_bilinear(const Array2D<double>& values, std::size_t out_h,
                                std::size_t out_w);

// RIFF/WAVE reader for 16-bit PCM and 32-bit IEEE float. Multichannel data
// is averaged to mono; 16-bit samples are divided by 32768.
AudioClip read_wav(const std::string& path);

// Writes 16-bit PCM mono: round(x * 32768) clamped to the int16 range.
void write_wav(const std::string& path, const AudioClip& clip);

}  // namespace spectrocam
