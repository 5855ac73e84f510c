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

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "spectrocam/cam.hpp"
#include "spectrocam/network.hpp"
#include "spectrocam/pipeline.hpp"
#include "spectrocam/signal.hpp"
#include "spectrocam/train.hpp"

namespace spectrocam::cli {

enum class Experiment { kVowelFullband, kVowel4k, kVoicedUnvoiced, kCustom };

std::string_view experiment_name(Experiment e);

enum class CorpusSource { kSynthetic, kManifest };

struct RunConfig {
  Experiment experiment = Experiment::kVowelFullband;
  std::uint64_t seed = 7;
  std::string out_dir = "spectrocam_out";

  CorpusSource corpus = CorpusSource::kSynthetic;
  std::string synth_spec;  // empty: built-in tables
  std::string manifest;    // empty: <out_dir>/corpus/manifest.csv
  int clips_per_class = 1000;
  double train_fraction = 0.7;
  int sample_rate = 22050;
  std::vector<std::string> labels;

  double f_max = 0.0;
  std::size_t image_h = 96;
  std::size_t image_w = 96;
  StftParams stft;

  TrainConfig train;
  std::vector<int> channels{8, 16, 32};
  std::vector<int> blocks{2, 2, 2};
  int stem_stride = 2;

  std::string checkpoint;  // empty: <out_dir>/model.sxai
  double alpha = 0.45;
  std::vector<Band> bands;  // empty: default_bands(f_max)
  int explain_per_class = 3;
  int png_scale = 2;
  std::string clip;  // explain this WAV instead of test-split clips

  std::string manifest_path() const;
  std::string checkpoint_path() const;
  SpectroPipeline pipeline() const;
  NetworkConfig network_config() const;
  TrainConfig train_config() const;
  std::vector<Band> profile_bands() const;
};

struct ConfigKey {
  std::string name;
  std::string help;
};

// Every recognized key, in documentation order.
const std::vector<ConfigKey>& config_keys();

using Overrides = std::vector<std::pair<std::string, std::string>>;

// Defaults, then the file (if path is nonempty), then overrides. Unknown keys,
// malformed values and preset conflicts throw ConfigError.
RunConfig load_run_config(const std::string& path, const Overrides& overrides);
RunConfig make_run_config(const std::map<std::string, std::string>& values);

// The effective configuration as `key = value` lines; reloading it yields the
// same RunConfig.
std::string format_run_config(const RunConfig& cfg);

}  // namespace spectrocam::cli
