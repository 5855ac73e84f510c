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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "spectrocam/tensor.hpp"

namespace spectrocam {

// Residual CNN topology: a 3x3 stem conv, stages of residual blocks (the
// first block of every stage after the first downsamples by 2), global
// average pooling and a linear head.
struct NetworkConfig {
  std::size_t input_h = 96;
  std::size_t input_w = 96;
  std::vector<int> channels_per_stage{16, 32, 64};
  std::vector<int> blocks_per_stage{2, 2, 2};
  int stem_stride = 2;
  int n_classes = 2;
  std::uint64_t seed = 7;

  void validate() const;
  friend bool operator==(const NetworkConfig&, const NetworkConfig&) = default;
};

// Affine map applied to raw dB images before the stem: (x - mean) / std.
struct InputNorm {
  double mean = 0.0;
  double std = 1.0;
  friend bool operator==(const InputNorm&, const InputNorm&) = default;
};

template <typename T>
struct ForwardOutput {
  Tensor<T> logits;    // [N, K]
  Tensor<T> features;  // [N, C_last, h, w], final conv-stage activations
};

template <typename T>
struct LossAndGrads {
  double loss = 0.0;
  Tensor<T> logits;
  std::vector<Tensor<T>> grads;  // aligned with Network::parameters()
};

template <typename T>
class Network {
 public:
  // He-initialized from config.seed; biases start at zero.
  explicit Network(const NetworkConfig& config);

  const NetworkConfig& config() const noexcept { return config_; }

  // Parameters in declaration (and serialization) order.
  std::vector<Tensor<T>>& parameters() noexcept { return params_; }
  const std::vector<Tensor<T>>& parameters() const noexcept { return params_; }
  const std::vector<std::string>& parameter_names() const noexcept { return names_; }
  const Tensor<T>& parameter(std::string_view name) const;
  Tensor<T>& parameter(std::string_view name);

  InputNorm& input_norm() noexcept { return norm_; }
  const InputNorm& input_norm() const noexcept { return norm_; }

  const Tensor<T>& fc_weight() const { return params_[fc_weight_]; }
  const Tensor<T>& fc_bias() const { return params_[fc_weight_ + 1]; }

  // batch [N,1,H,W] with H, W equal to the configured input size.
  ForwardOutput<T> forward(const Tensor<T>& batch) const;

  // Mean cross-entropy and its gradient for every parameter.
  LossAndGrads<T> loss_and_grads(const Tensor<T>& batch, std::span<const int> labels) const;

  // Smallest |pre-activation| over every ReLU input for this batch.
  double min_abs_preactivation(const Tensor<T>& batch) const;

  template <typename U>
  Network<U> cast() const;

 private:
  struct Conv {
    std::size_t weight;  // index into params_; bias follows at weight + 1
    int stride;
    int padding;
  };
  struct Block {
    Conv conv1;
    Conv conv2;
    std::optional<Conv> projection;
  };
  struct Cache;

  void build_layout();
  Conv add_conv(const std::string& prefix, int in_ch, int out_ch, int kernel, int stride);
  Tensor<T> run(const Tensor<T>& batch, Cache* cache) const;
  Tensor<T> conv(const Conv& c, const Tensor<T>& x) const;

  NetworkConfig config_;
  InputNorm norm_;
  std::vector<Tensor<T>> params_;
  std::vector<std::string> names_;
  Conv stem_{};
  std::vector<Block> blocks_;
  std::size_t fc_weight_ = 0;
};

}  // namespace spectrocam
