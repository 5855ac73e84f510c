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

#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "spectrocam/layers.hpp"
#include "spectrocam/network.hpp"
#include "spectrocam/train.hpp"

namespace {

using namespace spectrocam;

Tensor<float> random_tensor(Shape shape, std::uint64_t seed) {
  Tensor<float> t(std::move(shape));
  std::mt19937_64 rng(seed);
  std::normal_distribution<float> g;
  for (auto& v : t.values()) v = g(rng);
  return t;
}

// Args: channels, spatial size.
void BM_ConvForward(benchmark::State& state) {
  const auto c = static_cast<std::size_t>(state.range(0));
  const auto s = static_cast<std::size_t>(state.range(1));
  const auto x = random_tensor({32, c, s, s}, 1);
  const auto w = random_tensor({c, c, 3, 3}, 2);
  const auto b = random_tensor({c}, 3);
  for (auto _ : state) benchmark::DoNotOptimize(layers::conv2d_forward(x, w, b, 1, 1));
}
BENCHMARK(BM_ConvForward)->Args({8, 48})->Args({16, 24})->Args({32, 12})->Unit(benchmark::kMillisecond);

void BM_ConvBackward(benchmark::State& state) {
  const auto c = static_cast<std::size_t>(state.range(0));
  const auto s = static_cast<std::size_t>(state.range(1));
  const auto x = random_tensor({32, c, s, s}, 1);
  const auto w = random_tensor({c, c, 3, 3}, 2);
  const auto g = random_tensor({32, c, s, s}, 3);
  for (auto _ : state) benchmark::DoNotOptimize(layers::conv2d_backward(x, w, g, 1, 1, true));
}
BENCHMARK(BM_ConvBackward)->Args({8, 48})->Args({16, 24})->Args({32, 12})->Unit(benchmark::kMillisecond);

NetworkConfig net_config(int width) {
  NetworkConfig cfg;
  cfg.channels_per_stage = {width, 2 * width, 4 * width};
  cfg.n_classes = 5;
  return cfg;
}

// Arg: first-stage channels.
void BM_TrainStep(benchmark::State& state) {
  Network<float> net(net_config(static_cast<int>(state.range(0))));
  const auto batch = random_tensor({32, 1, 96, 96}, 4);
  std::vector<int> labels(32);
  for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = static_cast<int>(i % 5);
  AdamState<float> adam;
  TrainConfig cfg;
  long step = 0;
  for (auto _ : state) {
    const auto lg = net.loss_and_grads(batch, labels);
    adam_step(net.parameters(), lg.grads, adam, ++step, cfg);
  }
  state.SetItemsProcessed(state.iterations() * 32);
}
BENCHMARK(BM_TrainStep)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_Forward(benchmark::State& state) {
  const Network<float> net(net_config(static_cast<int>(state.range(0))));
  const auto image = random_tensor({1, 1, 96, 96}, 5);
  for (auto _ : state) benchmark::DoNotOptimize(net.forward(image));
}
BENCHMARK(BM_Forward)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace
