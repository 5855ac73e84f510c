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

#include "spectrocam/eval.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "spectrocam/error.hpp"
#include "spectrocam/keyvalue.hpp"

namespace spectrocam {

ConfusionMatrix::ConfusionMatrix(std::vector<std::string> labels)
    : label_set(std::move(labels)), counts(label_set.size(), label_set.size(), 0) {}

void ConfusionMatrix::add(int truth, int predicted) {
  const auto k = static_cast<int>(label_set.size());
  if (truth < 0 || truth >= k || predicted < 0 || predicted >= k) {
    throw InvalidInput(fmt::format("confusion entry ({}, {}) outside {} classes", truth,
                                   predicted, k));
  }
  ++counts(static_cast<std::size_t>(truth), static_cast<std::size_t>(predicted));
}

std::int64_t ConfusionMatrix::total() const {
  std::int64_t t = 0;
  for (const auto c : counts.data()) t += c;
  return t;
}

std::int64_t ConfusionMatrix::trace() const {
  std::int64_t t = 0;
  for (std::size_t i = 0; i < label_set.size(); ++i) t += counts(i, i);
  return t;
}

std::vector<int> predict(const Network<float>& net, const Tensor<float>& images,
                         std::size_t batch_size) {
  if (images.rank() != 4) throw ShapeError("predict expects [N,1,H,W] images");
  const std::size_t n = images.dim(0);
  const std::size_t per = images.size() / std::max<std::size_t>(n, 1);
  batch_size = std::max<std::size_t>(batch_size, 1);
  std::vector<int> out;
  out.reserve(n);
  for (std::size_t start = 0; start < n; start += batch_size) {
    const std::size_t count = std::min(batch_size, n - start);
    Tensor<float> batch({count, images.dim(1), images.dim(2), images.dim(3)});
    std::copy_n(images.data() + start * per, count * per, batch.data());
    const auto logits = net.forward(batch).logits;
    const std::size_t k = logits.dim(1);
    for (std::size_t i = 0; i < count; ++i) {
      const float* row = logits.data() + i * k;
      out.push_back(static_cast<int>(std::max_element(row, row + k) - row));
    }
  }
  return out;
}

ConfusionMatrix confusion_from_predictions(std::vector<std::string> label_set,
                                           std::span<const int> truth,
                                           std::span<const int> predicted) {
  if (truth.size() != predicted.size()) {
    throw InvalidInput(fmt::format("{} labels but {} predictions", truth.size(),
                                   predicted.size()));
  }
  ConfusionMatrix cm(std::move(label_set));
  for (std::size_t i = 0; i < truth.size(); ++i) cm.add(truth[i], predicted[i]);
  return cm;
}

ConfusionMatrix evaluate(const Network<float>& net, const std::vector<std::string>& label_set,
                         const Dataset& data) {
  if (data.size() == 0) throw ConfigError("nothing to evaluate: the split is empty");
  const auto predicted = predict(net, data.images);
  return confusion_from_predictions(label_set, data.labels, predicted);
}

ConfusionMatrix evaluate(const Checkpoint& ckpt, const DatasetManifest& manifest,
                         const std::filesystem::path& base_dir, const SpectroPipeline& pipeline) {
  if (ckpt.label_set != manifest.label_set) {
    throw ConfigError(fmt::format("checkpoint labels [{}] differ from manifest labels [{}]",
                                  join(ckpt.label_set, ","), join(manifest.label_set, ",")));
  }
  if (manifest.split(Split::kTest).empty()) {
    throw ConfigError("nothing to evaluate: the test split is empty");
  }
  const auto loaded = load_split(manifest, Split::kTest, base_dir, pipeline);
  return evaluate(ckpt.network, ckpt.label_set, loaded.data);
}

EvalReport summarize(const ConfusionMatrix& cm) {
  EvalReport r;
  r.total = cm.total();
  if (r.total == 0) throw InvalidInput("cannot summarize an empty confusion matrix");
  r.overall_accuracy = static_cast<double>(cm.trace()) / static_cast<double>(r.total);

  const std::size_t k = cm.label_set.size();
  for (std::size_t i = 0; i < k; ++i) {
    std::int64_t row = 0, col = 0;
    for (std::size_t j = 0; j < k; ++j) {
      row += cm.counts(i, j);
      col += cm.counts(j, i);
    }
    ClassMetrics m;
    m.label = cm.label_set[i];
    const auto diag = static_cast<double>(cm.counts(i, i));
    m.recall_undefined = row == 0;
    m.precision_undefined = col == 0;
    m.recall = row ? diag / static_cast<double>(row) : 0.0;
    m.precision = col ? diag / static_cast<double>(col) : 0.0;
    r.per_class.push_back(m);
  }
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a + 1; b < k; ++b) {
      PairAsymmetry p;
      p.label_a = cm.label_set[a];
      p.label_b = cm.label_set[b];
      p.a_to_b = cm.counts(a, b);
      p.b_to_a = cm.counts(b, a);
      const auto hi = std::max(p.a_to_b, p.b_to_a);
      const auto lo = std::min(p.a_to_b, p.b_to_a);
      p.ratio = static_cast<double>(hi) / static_cast<double>(std::max<std::int64_t>(1, lo));
      p.flagged = lo == 0;
      r.asymmetry.push_back(p);
    }
  }
  return r;
}

std::string format_confusion_csv(const ConfusionMatrix& cm) {
  std::string out = "true\\predicted";
  for (const auto& l : cm.label_set) out += "," + l;
  out += "\n";
  for (std::size_t i = 0; i < cm.label_set.size(); ++i) {
    out += cm.label_set[i];
    for (std::size_t j = 0; j < cm.label_set.size(); ++j) {
      out += fmt::format(",{}", cm.counts(i, j));
    }
    out += "\n";
  }
  return out;
}

std::string format_report(const EvalReport& report) {
  std::string out = "# confusion rows = true label, columns = predicted label\n";
  out += fmt::format("overall_accuracy = {}\n", format_double(report.overall_accuracy));
  out += fmt::format("total = {}\n", report.total);
  for (const auto& m : report.per_class) {
    out += fmt::format("recall.{} = {}\n", m.label, format_double(m.recall));
    if (m.recall_undefined) out += fmt::format("recall.{}.undefined = true\n", m.label);
    out += fmt::format("precision.{} = {}\n", m.label, format_double(m.precision));
    if (m.precision_undefined) out += fmt::format("precision.{}.undefined = true\n", m.label);
  }
  for (const auto& p : report.asymmetry) {
    out += fmt::format("asymmetry.{}.{} = {}\n", p.label_a, p.label_b, format_double(p.ratio));
    if (p.flagged) out += fmt::format("asymmetry.{}.{}.flagged = true\n", p.label_a, p.label_b);
  }
  return out;
}

std::string format_asymmetry_csv(const EvalReport& report) {
  std::string out = "label_a,label_b,a_to_b,b_to_a,ratio,flagged\n";
  for (const auto& p : report.asymmetry) {
    out += fmt::format("{},{},{},{},{},{}\n", p.label_a, p.label_b, p.a_to_b, p.b_to_a,
                       format_double(p.ratio), p.flagged ? 1 : 0);
  }
  return out;
}

}  // namespace spectrocam
