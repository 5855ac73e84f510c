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

#include "spectrocam/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <fmt/format.h>

#include "spectrocam/keyvalue.hpp"

namespace spectrocam {

void TrainConfig::validate() const {
  if (batch_size < 1) throw InvalidInput("batch_size must be >= 1");
  if (!(learning_rate > 0.0) || !(eps > 0.0)) throw InvalidInput("learning_rate and eps must be positive");
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
    throw InvalidInput("beta1 and beta2 must lie in [0, 1)");
  }
  if (epochs < 0) throw InvalidInput("epochs must be >= 0");
}

template <typename T>
void adam_step(std::vector<Tensor<T>>& params, const std::vector<Tensor<T>>& grads,
               AdamState<T>& state, long step, const TrainConfig& cfg) {
  if (step < 1) throw InvalidInput("adam step index is 1-based");
  if (grads.size() != params.size()) {
    throw ShapeError(fmt::format("adam: {} gradients for {} parameters", grads.size(), params.size()));
  }
  if (state.m.empty()) {
    for (const auto& p : params) {
      state.m.emplace_back(p.shape());
      state.v.emplace_back(p.shape());
    }
  }
  if (state.m.size() != params.size()) throw ShapeError("adam state does not match parameters");

  const double c1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(step));
  const double c2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(step));
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto& p = params[i];
    const auto& g = grads[i];
    if (g.shape() != p.shape() || state.m[i].shape() != p.shape()) {
      throw ShapeError(fmt::format("adam: parameter {} has shape {}, gradient {}", i,
                                   shape_string(p.shape()), shape_string(g.shape())));
    }
    auto& m = state.m[i];
    auto& v = state.v[i];
    for (std::size_t j = 0; j < p.size(); ++j) {
      const double gj = g[j];
      const double mj = cfg.beta1 * m[j] + (1.0 - cfg.beta1) * gj;
      const double vj = cfg.beta2 * v[j] + (1.0 - cfg.beta2) * gj * gj;
      m[j] = static_cast<T>(mj);
      v[j] = static_cast<T>(vj);
      const double update = cfg.learning_rate * (mj / c1) / (std::sqrt(vj / c2) + cfg.eps);
      p[j] = static_cast<T>(static_cast<double>(p[j]) - update);
    }
  }
}

template void adam_step(std::vector<Tensor<float>>&, const std::vector<Tensor<float>>&,
                        AdamState<float>&, long, const TrainConfig&);
template void adam_step(std::vector<Tensor<double>>&, const std::vector<Tensor<double>>&,
                        AdamState<double>&, long, const TrainConfig&);

InputNorm dataset_norm(const Dataset& data) {
  const auto values = data.images.values();
  if (values.empty()) return {};
  double sum = 0.0;
  for (const float v : values) sum += v;
  const double mean = sum / static_cast<double>(values.size());
  double sq = 0.0;
  for (const float v : values) sq += (v - mean) * (v - mean);
  const double stddev = std::sqrt(sq / static_cast<double>(values.size()));
  return {mean, stddev > 1e-12 ? stddev : 1.0};
}

Tensor<float> gather_batch(const Dataset& data, std::span<const std::size_t> indices,
                           std::vector<int>* labels) {
  const auto& shape = data.images.shape();
  const std::size_t plane = shape[1] * shape[2] * shape[3];
  Tensor<float> batch({indices.size(), shape[1], shape[2], shape[3]});
  if (labels) labels->clear();
  for (std::size_t b = 0; b < indices.size(); ++b) {
    const float* src = data.images.data() + indices[b] * plane;
    std::copy(src, src + plane, batch.data() + b * plane);
    if (labels) labels->push_back(data.labels[indices[b]]);
  }
  return batch;
}

std::vector<EpochStats> train(Network<float>& net, const Dataset& data, const TrainConfig& cfg,
                              const EpochCallback& on_epoch) {
  cfg.validate();
  if (data.size() == 0) throw InvalidInput("training split is empty");
  if (data.images.rank() != 4 || data.images.dim(0) != data.size()) {
    throw ShapeError("dataset images must be [N,1,H,W] with one label per image");
  }
  net.input_norm() = dataset_norm(data);

  std::mt19937_64 rng(cfg.seed);
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  AdamState<float> adam;
  long step = 0;
  std::vector<EpochStats> history;
  std::vector<int> labels;

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double loss_sum = 0.0;
    std::size_t correct = 0;
    for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t end = std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
      const std::span<const std::size_t> idx(order.data() + start, end - start);
      const auto batch = gather_batch(data, idx, &labels);
      auto result = net.loss_and_grads(batch, labels);
      loss_sum += result.loss * static_cast<double>(idx.size());
      const std::size_t k = result.logits.dim(1);
      for (std::size_t i = 0; i < idx.size(); ++i) {
        const float* row = result.logits.data() + i * k;
        const auto pred = static_cast<int>(std::max_element(row, row + k) - row);
        if (pred == labels[i]) ++correct;
      }
      adam_step(net.parameters(), result.grads, adam, ++step, cfg);
    }
    EpochStats stats{epoch, loss_sum / static_cast<double>(data.size()),
                     static_cast<double>(correct) / static_cast<double>(data.size())};
    history.push_back(stats);
    if (on_epoch) on_epoch(stats);
  }
  return history;
}

std::string format_history_csv(const std::vector<EpochStats>& history) {
  std::string out = "epoch,train_loss,train_accuracy\n";
  for (const auto& h : history) {
    out += fmt::format("{},{},{}\n", h.epoch, format_double(h.train_loss),
                       format_double(h.train_accuracy));
  }
  return out;
}

}  // namespace spectrocam
