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
#include <string>
#include <vector>

#include "spectrocam/network.hpp"

namespace spectrocam {

inline constexpr char kCheckpointMagic[4] = {'S', 'X', 'A', 'I'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct TrainingMeta {
  int epochs = 0;
  double final_train_loss = 0.0;
  std::uint64_t seed = 0;

  friend bool operator==(const TrainingMeta&, const TrainingMeta&) = default;
};

struct Checkpoint {
  Network<float> network;
  std::vector<std::string> label_set;
  TrainingMeta meta;
};

// Layout (all integers u32 little-endian):
//   "SXAI" | version | header length | header (UTF-8 `key = value` lines:
//   network config, labels, input normalization, training meta) | one block
//   per parameter in declaration order: name length, name, rank, extents,
//   float32 little-endian payload.
std::string serialize_checkpoint(const Checkpoint& ckpt);
Checkpoint deserialize_checkpoint(std::string_view bytes);

void save_checkpoint(const std::string& path, const Checkpoint& ckpt);
// Throws FormatError on bad magic, unsupported version or truncation.
Checkpoint load_checkpoint(const std::string& path);

}  // namespace spectrocam
