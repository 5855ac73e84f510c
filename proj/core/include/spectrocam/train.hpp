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
#include <functional>
#include <string>
#include <vector>

#include "spectrocam/network.hpp"
#include "spectrocam/tensor.hpp"

namespace spectrocam {

struct TrainConfig {
  int batch_size = 32;
  double learning_rate = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  int epochs = 30;
  std::uint64_t seed = 7;

  void validate() const;
};

// First and second moment estimates, one tensor per parameter. Empty until
// the first adam_step.
template <typename T>
struct AdamState {
  std::vector<Tensor<T>> m;
  std::vector<Tensor<T>> v;
};

// Bias-corrected Adam update of `params` in place. `step` is 1-based.
template <typename T>
void adam_step(std::vector<Tensor<T>>& params, const std::vector<Tensor<T>>& grads,
               AdamState<T>& state, long step, const TrainConfig& cfg);

// Images [N,1,H,W] (raw dB values) with integer class labels.
struct Dataset {
  Tensor<float> images;
  std::vector<int> labels;

  std::size_t size() const { return labels.size(); }
};

struct EpochStats {
  int epoch = 0;
  double train_loss = 0.0;      // mean over the epoch's examples
  double train_accuracy = 0.0;  // from the logits seen during the epoch

  friend bool operator==(const EpochStats&, const EpochStats&) = default;
};

// Pixel mean and standard deviation over every image in the dataset.
InputNorm dataset_norm(const Dataset& data);

// Copies the listed examples into a [B,1,H,W] batch.
Tensor<float> gather_batch(const Dataset& data, std::span<const std::size_t> indices,
                           std::vector<int>* labels);

using EpochCallback = std::function<void(const EpochStats&)>;

// Minibatch Adam over seeded shuffles of `data`. Sets the network's input
// normalization from the data before the first epoch. Single-threaded and
// deterministic for a given cfg.seed.
std::vector<EpochStats> train(Network<float>& net, const Dataset& data, const TrainConfig& cfg,
                              const EpochCallback& on_epoch = {});

std::string format_history_csv(const std::vector<EpochStats>& history);

}  // namespace spectrocam
