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

#include "spectrocam/pipeline.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "spectrocam/error.hpp"

namespace spectrocam {

Spectrogram SpectroPipeline::spectrogram(const AudioClip& clip) const {
  return cap_frequency(log_spectrogram(clip, stft), f_max);
}

Array2D<double> SpectroPipeline::image(const Spectrogram& spec) const {
  return resize_bilinear(spec.values, image_h, image_w);
}

LoadedSplit load_split(const DatasetManifest& manifest, Split split,
                       const std::filesystem::path& base_dir, const SpectroPipeline& pipeline) {
  LoadedSplit out;
  out.entries = manifest.split(split);
  const std::size_t plane = pipeline.image_h * pipeline.image_w;
  out.data.images = Tensor<float>({out.entries.size(), 1, pipeline.image_h, pipeline.image_w});
  out.data.labels.reserve(out.entries.size());
  for (std::size_t i = 0; i < out.entries.size(); ++i) {
    const auto& entry = out.entries[i];
    const auto it = std::find(manifest.label_set.begin(), manifest.label_set.end(), entry.label);
    if (it == manifest.label_set.end()) {
      throw InvalidInput(fmt::format("{}: label `{}` not in label set", entry.path, entry.label));
    }
    out.data.labels.push_back(static_cast<int>(it - manifest.label_set.begin()));
    const AudioClip clip = read_wav((base_dir / entry.path).string());
    const auto img = pipeline.image(clip);
    std::copy(img.data().begin(), img.data().end(), out.data.images.data() + i * plane);
  }
  return out;
}

}  // namespace spectrocam
