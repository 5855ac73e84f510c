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

#include "spectrocam/network.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <fmt/format.h>

#include "spectrocam/layers.hpp"

namespace spectrocam {

void NetworkConfig::validate() const {
  if (n_classes < 2) throw InvalidInput(fmt::format("n_classes must be >= 2, got {}", n_classes));
  if (channels_per_stage.empty() || channels_per_stage.size() != blocks_per_stage.size()) {
    throw InvalidInput("channels_per_stage and blocks_per_stage must be nonempty and equal length");
  }
  for (std::size_t s = 0; s < channels_per_stage.size(); ++s) {
    if (channels_per_stage[s] < 1 || blocks_per_stage[s] < 1) {
      throw InvalidInput("every stage needs >= 1 channel and >= 1 block");
    }
  }
  if (input_h < 8 || input_w < 8) {
    throw InvalidInput(fmt::format("input must be at least 8x8, got {}x{}", input_h, input_w));
  }
  if (stem_stride < 1 || stem_stride > 2) throw InvalidInput("stem_stride must be 1 or 2");
}

template <typename T>
struct Network<T>::Cache {
  struct BlockCache {
    Tensor<T> input;
    Tensor<T> pre1;
    Tensor<T> hidden;
    Tensor<T> pre_sum;
  };
  Tensor<T> normalized;
  Tensor<T> stem_pre;
  std::vector<BlockCache> blocks;
  Tensor<T> features;
  Tensor<T> pooled;
};

template <typename T>
Network<T>::Network(const NetworkConfig& config) : config_(config) {
  config_.validate();
  build_layout();

  std::mt19937_64 rng(config_.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::size_t total_blocks = 0;
  for (const int b : config_.blocks_per_stage) total_blocks += static_cast<std::size_t>(b);
  // Residual branches end in a conv scaled down so the summed variance stays
  // bounded without normalization layers.
  const double branch_scale = 1.0 / std::sqrt(static_cast<double>(total_blocks));

  const auto fill = [&](std::size_t idx, double stddev) {
    for (auto& v : params_[idx].values()) v = static_cast<T>(stddev * gauss(rng));
  };
  const auto fan_in = [&](std::size_t idx) {
    const auto& s = params_[idx].shape();
    return static_cast<double>(shape_size(s) / s[0]);
  };
  fill(stem_.weight, std::sqrt(2.0 / fan_in(stem_.weight)));
  for (const auto& block : blocks_) {
    fill(block.conv1.weight, std::sqrt(2.0 / fan_in(block.conv1.weight)));
    fill(block.conv2.weight, branch_scale * std::sqrt(2.0 / fan_in(block.conv2.weight)));
    if (block.projection) {
      fill(block.projection->weight, std::sqrt(1.0 / fan_in(block.projection->weight)));
    }
  }
  fill(fc_weight_, std::sqrt(1.0 / fan_in(fc_weight_)));
}

template <typename T>
typename Network<T>::Conv Network<T>::add_conv(const std::string& prefix, int in_ch, int out_ch,
                                               int kernel, int stride) {
  const auto k = static_cast<std::size_t>(kernel);
  Conv c{params_.size(), stride, kernel / 2};
  params_.emplace_back(Shape{static_cast<std::size_t>(out_ch), static_cast<std::size_t>(in_ch), k, k});
  names_.push_back(prefix + ".weight");
  params_.emplace_back(Shape{static_cast<std::size_t>(out_ch)});
  names_.push_back(prefix + ".bias");
  return c;
}

template <typename T>
void Network<T>::build_layout() {
  const auto& channels = config_.channels_per_stage;
  stem_ = add_conv("stem", 1, channels[0], 3, config_.stem_stride);
  int in_ch = channels[0];
  for (std::size_t s = 0; s < channels.size(); ++s) {
    for (int b = 0; b < config_.blocks_per_stage[s]; ++b) {
      const std::string prefix = fmt::format("stage{}.block{}", s + 1, b + 1);
      const int stride = (s > 0 && b == 0) ? 2 : 1;
      Block block;
      block.conv1 = add_conv(prefix + ".conv1", in_ch, channels[s], 3, stride);
      block.conv2 = add_conv(prefix + ".conv2", channels[s], channels[s], 3, 1);
      if (stride != 1 || in_ch != channels[s]) {
        block.projection = add_conv(prefix + ".proj", in_ch, channels[s], 1, stride);
      }
      blocks_.push_back(block);
      in_ch = channels[s];
    }
  }
  fc_weight_ = params_.size();
  params_.emplace_back(Shape{static_cast<std::size_t>(config_.n_classes), static_cast<std::size_t>(in_ch)});
  names_.push_back("fc.weight");
  params_.emplace_back(Shape{static_cast<std::size_t>(config_.n_classes)});
  names_.push_back("fc.bias");
}

template <typename T>
const Tensor<T>& Network<T>::parameter(std::string_view name) const {
  const auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) throw InvalidInput(fmt::format("no parameter named `{}`", name));
  return params_[static_cast<std::size_t>(it - names_.begin())];
}

template <typename T>
Tensor<T>& Network<T>::parameter(std::string_view name) {
  return const_cast<Tensor<T>&>(std::as_const(*this).parameter(name));
}

template <typename T>
Tensor<T> Network<T>::conv(const Conv& c, const Tensor<T>& x) const {
  return layers::conv2d_forward(x, params_[c.weight], params_[c.weight + 1], c.stride, c.padding);
}

template <typename T>
Tensor<T> Network<T>::run(const Tensor<T>& batch, Cache* cache) const {
  if (batch.rank() != 4 || batch.dim(1) != 1 || batch.dim(2) != config_.input_h ||
      batch.dim(3) != config_.input_w) {
    throw ShapeError(fmt::format("network expects [N,1,{},{}], got {}", config_.input_h,
                                 config_.input_w, shape_string(batch.shape())));
  }
  Tensor<T> x(batch.shape());
  const T mean = static_cast<T>(norm_.mean);
  const T inv_std = static_cast<T>(1.0 / norm_.std);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = (batch[i] - mean) * inv_std;

  Tensor<T> stem_pre = conv(stem_, x);
  Tensor<T> current = layers::relu(stem_pre);
  if (cache) {
    cache->normalized = std::move(x);
    cache->stem_pre = std::move(stem_pre);
    cache->blocks.clear();
  }
  for (const auto& block : blocks_) {
    Tensor<T> pre1 = conv(block.conv1, current);
    Tensor<T> hidden = layers::relu(pre1);
    Tensor<T> sum = conv(block.conv2, hidden);
    if (block.projection) {
      const Tensor<T> shortcut = conv(*block.projection, current);
      for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += shortcut[i];
    } else {
      for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += current[i];
    }
    Tensor<T> out = layers::relu(sum);
    if (cache) {
      cache->blocks.push_back(
          {std::move(current), std::move(pre1), std::move(hidden), std::move(sum)});
    }
    current = std::move(out);
  }
  return current;
}

template <typename T>
ForwardOutput<T> Network<T>::forward(const Tensor<T>& batch) const {
  ForwardOutput<T> out;
  out.features = run(batch, nullptr);
  const Tensor<T> pooled = layers::global_avg_pool(out.features);
  out.logits = layers::linear_forward(pooled, fc_weight(), fc_bias());
  return out;
}

template <typename T>
LossAndGrads<T> Network<T>::loss_and_grads(const Tensor<T>& batch,
                                           std::span<const int> labels) const {
  Cache cache;
  const Tensor<T> features = run(batch, &cache);
  const Tensor<T> pooled = layers::global_avg_pool(features);
  LossAndGrads<T> result;
  result.logits = layers::linear_forward(pooled, fc_weight(), fc_bias());
  auto ce = layers::cross_entropy(result.logits, labels);
  result.loss = ce.loss;
  result.grads.resize(params_.size());

  auto fc = layers::linear_backward(pooled, fc_weight(), ce.grad);
  result.grads[fc_weight_] = std::move(fc.weight);
  result.grads[fc_weight_ + 1] = std::move(fc.bias);
  Tensor<T> grad = layers::global_avg_pool_backward(fc.input, features.dim(2), features.dim(3));

  const auto store = [&](const Conv& c, layers::Conv2dGrads<T>& g) {
    result.grads[c.weight] = std::move(g.weight);
    result.grads[c.weight + 1] = std::move(g.bias);
  };
  for (std::size_t b = blocks_.size(); b-- > 0;) {
    const auto& block = blocks_[b];
    auto& bc = cache.blocks[b];
    const Tensor<T> grad_sum = layers::relu_backward(bc.pre_sum, grad);
    auto g2 = layers::conv2d_backward(bc.hidden, params_[block.conv2.weight], grad_sum,
                                      block.conv2.stride, block.conv2.padding, true);
    const Tensor<T> grad_pre1 = layers::relu_backward(bc.pre1, g2.input);
    auto g1 = layers::conv2d_backward(bc.input, params_[block.conv1.weight], grad_pre1,
                                      block.conv1.stride, block.conv1.padding, true);
    store(block.conv2, g2);
    store(block.conv1, g1);
    grad = std::move(g1.input);
    if (block.projection) {
      auto gp = layers::conv2d_backward(bc.input, params_[block.projection->weight], grad_sum,
                                        block.projection->stride, block.projection->padding, true);
      for (std::size_t i = 0; i < grad.size(); ++i) grad[i] += gp.input[i];
      store(*block.projection, gp);
    } else {
      for (std::size_t i = 0; i < grad.size(); ++i) grad[i] += grad_sum[i];
    }
  }
  const Tensor<T> grad_stem = layers::relu_backward(cache.stem_pre, grad);
  auto gs = layers::conv2d_backward(cache.normalized, params_[stem_.weight], grad_stem,
                                    stem_.stride, stem_.padding, false);
  store(stem_, gs);
  return result;
}

template <typename T>
double Network<T>::min_abs_preactivation(const Tensor<T>& batch) const {
  Cache cache;
  run(batch, &cache);
  double smallest = std::numeric_limits<double>::infinity();
  const auto scan = [&](const Tensor<T>& t) {
    for (const T v : t.values()) smallest = std::min(smallest, std::abs(static_cast<double>(v)));
  };
  scan(cache.stem_pre);
  for (const auto& bc : cache.blocks) {
    scan(bc.pre1);
    scan(bc.pre_sum);
  }
  return smallest;
}

template <typename T>
template <typename U>
Network<U> Network<T>::cast() const {
  Network<U> out(config_);
  for (std::size_t i = 0; i < params_.size(); ++i) out.parameters()[i] = params_[i].template cast<U>();
  out.input_norm() = norm_;
  return out;
}

template class Network<float>;
template class Network<double>;
template Network<double> Network<float>::cast<double>() const;
template Network<float> Network<double>::cast<float>() const;
template Network<float> Network<float>::cast<float>() const;
template Network<double> Network<double>::cast<double>() const;

}  // namespace spectrocam
