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

#include <filesystem>
#include <string>
#include <vector>

#include "spectrocam/corpus.hpp"
#include "spectrocam/signal.hpp"
#include "spectrocam/train.hpp"

namespace spectrocam {

// Audio -> capped log spectrogram -> fixed-size network input image.
struct SpectroPipeline {
  StftParams stft;
  double f_max = 11025.0;
  std::size_t image_h = 96;
  std::size_t image_w = 96;

  Spectrogram spectrogram(const AudioClip& clip) const;
  Array2D<double> image(const Spectrogram& spec) const;
  Array2D<double> image(const AudioClip& clip) const { return image(spectrogram(clip)); }
};

// Manifest entries of one split, loaded and converted to network inputs.
// Entry paths are resolved against base_dir.
struct LoadedSplit {
  Dataset data;
  std::vector<ManifestEntry> entries;
};

LoadedSplit load_split(const DatasetManifest& manifest, Split split,
                       const std::filesystem::path& base_dir, const SpectroPipeline& pipeline);

}  // namespace spectrocam
