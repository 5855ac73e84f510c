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
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "spectrocam/array2d.hpp"
#include "spectrocam/checkpoint.hpp"
#include "spectrocam/corpus.hpp"
#include "spectrocam/pipeline.hpp"
#include "spectrocam/train.hpp"

namespace spectrocam {

// counts(true, predicted).
struct ConfusionMatrix {
  std::vector<std::string> label_set;
  Array2D<std::int64_t> counts;

  ConfusionMatrix() = default;
  explicit ConfusionMatrix(std::vector<std::string> labels);

  void add(int truth, int predicted);
  std::int64_t total() const;
  std::int64_t trace() const;

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

// Argmax of the network's logits for every image, in batches.
std::vector<int> predict(const Network<float>& net, const Tensor<float>& images,
                         std::size_t batch_size = 64);

ConfusionMatrix confusion_from_predictions(std::vector<std::string> label_set,
                                           std::span<const int> truth,
                                           std::span<const int> predicted);

// Throws ConfigError when the data set is empty.
ConfusionMatrix evaluate(const Network<float>& net, const std::vector<std::string>& label_set,
                         const Dataset& data);

// Scores the manifest's test split. Throws ConfigError when the checkpoint's
// label set differs from the manifest's or the split is empty.
ConfusionMatrix evaluate(const Checkpoint& ckpt, const DatasetManifest& manifest,
                         const std::filesystem::path& base_dir, const SpectroPipeline& pipeline);

struct ClassMetrics {
  std::string label;
  double recall = 0.0;
  double precision = 0.0;
  bool recall_undefined = false;     // empty row
  bool precision_undefined = false;  // empty column
};

struct PairAsymmetry {
  std::string label_a;
  std::string label_b;
  std::int64_t a_to_b = 0;  // true a predicted b
  std::int64_t b_to_a = 0;
  double ratio = 1.0;       // max / max(1, min)
  bool flagged = false;     // at least one direction is zero
};

struct EvalReport {
  double overall_accuracy = 0.0;
  std::int64_t total = 0;
  std::vector<ClassMetrics> per_class;
  std::vector<PairAsymmetry> asymmetry;  // every unordered pair, a before b in label order
  double runtime_seconds = 0.0;
};

EvalReport summarize(const ConfusionMatrix& cm);

// Header is `true\predicted,<labels...>`; one row per true label.
std::string format_confusion_csv(const ConfusionMatrix& cm);

// `key = value` lines. Runtime is left out so the file is reproducible.
std::string format_report(const EvalReport& report);

std::string format_asymmetry_csv(const EvalReport& report);

}  // namespace spectrocam
