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

#include <benchmark/benchmark.h>

#include "spectrocam/pipeline.hpp"
#include "spectrocam/signal.hpp"

namespace {

using namespace spectrocam;

AudioClip noise_clip(double seconds) {
  AudioClip clip;
  clip.sample_rate = 22050;
  clip.samples.resize(static_cast<std::size_t>(seconds * clip.sample_rate));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (auto& v : clip.samples) v = u(rng);
  return clip;
}

void BM_Stft(benchmark::State& state) {
  const auto clip = noise_clip(static_cast<double>(state.range(0)) / 1000.0);
  const StftParams params;
  for (auto _ : state) benchmark::DoNotOptimize(stft(clip, params));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(clip.samples.size()));
}
BENCHMARK(BM_Stft)->Arg(250)->Arg(1000)->Arg(4000)->Unit(benchmark::kMicrosecond);

void BM_PipelineImage(benchmark::State& state) {
  const auto clip = noise_clip(0.4);
  SpectroPipeline pipe;
  pipe.f_max = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(pipe.image(clip));
}
BENCHMARK(BM_PipelineImage)->Arg(4000)->Arg(11025)->Unit(benchmark::kMicrosecond);

}  // namespace
