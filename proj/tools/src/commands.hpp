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

#include <cstddef>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "run_config.hpp"
#include "spectrocam/eval.hpp"

namespace spectrocam::cli {

struct SynthResult {
  std::string manifest_path;
  std::map<std::string, std::size_t> counts;
};

// Writes <out_dir>/corpus/<label>/<label>_NNNN.wav and the manifest.
SynthResult cmd_synth(const RunConfig& cfg, std::ostream& log);

struct ExtractOptions {
  std::string wav_dir;
  std::string alignment_dir;
  std::vector<std::string> keep;
  std::string out_dir;
  bool strict = false;
  double train_fraction = 0.7;
  std::uint64_t seed = 7;
};

struct ExtractResult {
  std::map<std::string, std::size_t> counts;
  std::vector<std::string> warnings;
  std::string manifest_path;  // empty when nothing was extracted
};

// Pairs <stem>.wav with <stem>.csv, cuts the kept phones into
// <out_dir>/<phone>/<stem>_<index>.wav and writes <out_dir>/manifest.csv.
ExtractResult cmd_extract(const ExtractOptions& opts, std::ostream& log);

struct TrainResult {
  std::string checkpoint_path;
  std::vector<EpochStats> history;
};

// Trains on the manifest's train split; writes the checkpoint and
// <out_dir>/history.csv.
TrainResult cmd_train(const RunConfig& cfg, std::ostream& log);

struct EvalResult {
  ConfusionMatrix confusion;
  EvalReport report;
};

// Scores the test split; writes confusion.csv, eval_report.txt and
// asymmetry.csv under out_dir, and the wall-clock time to eval_runtime.txt.
EvalResult cmd_eval(const RunConfig& cfg, std::ostream& log);

struct ClassProfile {
  std::string label;
  std::size_t count = 0;
  FrequencyImportance profile;
};

struct ExplainResult {
  std::vector<ClassProfile> class_profiles;  // empty when a single clip was explained
  std::vector<std::string> written;
};

// Overlay PNGs and profile CSVs under <out_dir>/explain.
ExplainResult cmd_explain(const RunConfig& cfg, std::ostream& log);

struct RunResult {
  TrainResult train;
  EvalResult eval;
  ExplainResult explain;
};

// synth (for a synthetic corpus), train, eval, explain.
RunResult cmd_run(const RunConfig& cfg, std::ostream& log);

}  // namespace spectrocam::cli
