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

#include <span>

#include "spectrocam/tensor.hpp"

// Stateless layer kernels used by Network. All batched tensors are NCHW.
namespace spectrocam::layers {

// Cross-correlation with zero padding. input [N,C,H,W], weight [Co,C,k,k]
// with odd k, bias [Co]. Output [N,Co,(H+2p-k)/s+1,(W+2p-k)/s+1].
template <typename T>
Tensor<T> conv2d_forward(const Tensor<T>& input, const Tensor<T>& weight, const Tensor<T>& bias,
                         int stride, int padding);

template <typename T>
struct Conv2dGrads {
  Tensor<T> input;  // empty unless requested
  Tensor<T> weight;
  Tensor<T> bias;
};

template <typename T>
Conv2dGrads<T> conv2d_backward(const Tensor<T>& input, const Tensor<T>& weight,
                               const Tensor<T>& grad_output, int stride, int padding,
                               bool need_input_grad);

template <typename T>
Tensor<T> relu(const Tensor<T>& x);

// grad * (pre > 0)
template <typename T>
Tensor<T> relu_backward(const Tensor<T>& pre, const Tensor<T>& grad);

// [N,C,H,W] -> [N,C] spatial mean.
template <typename T>
Tensor<T> global_avg_pool(const Tensor<T>& x);

template <typename T>
Tensor<T> global_avg_pool_backward(const Tensor<T>& grad, std::size_t height, std::size_t width);

// x [N,C], weight [K,C], bias [K] -> [N,K].
template <typename T>
Tensor<T> linear_forward(const Tensor<T>& x, const Tensor<T>& weight, const Tensor<T>& bias);

template <typename T>
struct LinearGrads {
  Tensor<T> input;
  Tensor<T> weight;
  Tensor<T> bias;
};

template <typename T>
LinearGrads<T> linear_backward(const Tensor<T>& x, const Tensor<T>& weight,
                               const Tensor<T>& grad_output);

// Row-wise softmax of [N,K] logits (max-subtracted).
template <typename T>
Tensor<T> softmax(const Tensor<T>& logits);

template <typename T>
struct CrossEntropy {
  double loss = 0.0;   // mean over the batch
  Tensor<T> grad;      // d loss / d logits
};

// Throws InvalidInput for labels outside [0, K).
template <typename T>
CrossEntropy<T> cross_entropy(const Tensor<T>& logits, std::span<const int> labels);

}  // namespace spectrocam::layers
