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

#include "spectrocam/checkpoint.hpp"

#include <bit>
#include <cstring>

#include <fmt/format.h>

#include "spectrocam/error.hpp"
#include "spectrocam/keyvalue.hpp"

namespace spectrocam {
namespace {

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

class Reader {
 public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}

  std::string_view take(std::size_t n, std::string_view what) {
    if (bytes_.size() - pos_ < n) {
      throw FormatError(fmt::format("checkpoint truncated while reading {}", what));
    }
    const auto out = bytes_.substr(pos_, n);
    pos_ += n;
    return out;
  }

  std::uint32_t u32(std::string_view what) {
    const auto b = take(4, what);
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(b[static_cast<std::size_t>(i)]);
    return v;
  }

  bool done() const { return pos_ == bytes_.size(); }

 private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

std::string int_list(const std::vector<int>& v) {
  std::vector<std::string> parts;
  for (const int x : v) parts.push_back(std::to_string(x));
  return join(parts, ",");
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (const auto& p : split_list(text)) out.push_back(static_cast<int>(parse_int(p)));
  return out;
}

}  // namespace

std::string serialize_checkpoint(const Checkpoint& ckpt) {
  const auto& net = ckpt.network;
  const auto& cfg = net.config();
  std::string header;
  header += fmt::format("input_h = {}\n", cfg.input_h);
  header += fmt::format("input_w = {}\n", cfg.input_w);
  header += fmt::format("channels_per_stage = {}\n", int_list(cfg.channels_per_stage));
  header += fmt::format("blocks_per_stage = {}\n", int_list(cfg.blocks_per_stage));
  header += fmt::format("stem_stride = {}\n", cfg.stem_stride);
  header += fmt::format("n_classes = {}\n", cfg.n_classes);
  header += fmt::format("init_seed = {}\n", cfg.seed);
  header += fmt::format("labels = {}\n", join(ckpt.label_set, ","));
  header += fmt::format("norm_mean = {}\n", format_double(net.input_norm().mean));
  header += fmt::format("norm_std = {}\n", format_double(net.input_norm().std));
  header += fmt::format("epochs = {}\n", ckpt.meta.epochs);
  header += fmt::format("final_train_loss = {}\n", format_double(ckpt.meta.final_train_loss));
  header += fmt::format("train_seed = {}\n", ckpt.meta.seed);

  std::string out(kCheckpointMagic, 4);
  put_u32(out, kCheckpointVersion);
  put_u32(out, static_cast<std::uint32_t>(header.size()));
  out += header;
  const auto& names = net.parameter_names();
  for (std::size_t i = 0; i < names.size(); ++i) {
    const auto& p = net.parameters()[i];
    put_u32(out, static_cast<std::uint32_t>(names[i].size()));
    out += names[i];
    put_u32(out, static_cast<std::uint32_t>(p.rank()));
    for (const auto extent : p.shape()) put_u32(out, static_cast<std::uint32_t>(extent));
    for (const float v : p.values()) put_u32(out, std::bit_cast<std::uint32_t>(v));
  }
  return out;
}

Checkpoint deserialize_checkpoint(std::string_view bytes) {
  Reader in(bytes);
  if (in.take(4, "magic") != std::string_view(kCheckpointMagic, 4)) {
    throw FormatError("not a checkpoint: bad magic");
  }
  const auto version = in.u32("version");
  if (version != kCheckpointVersion) {
    throw FormatError(fmt::format("unsupported checkpoint version: expected {}, got {}",
                                  kCheckpointVersion, version));
  }
  const auto header_len = in.u32("header length");
  KeyValueMap header;
  try {
    header = KeyValueMap(parse_key_values(in.take(header_len, "header")));
  } catch (const ParseError& e) {
    throw FormatError(fmt::format("checkpoint header {}", e.what()));
  }

  NetworkConfig cfg;
  std::vector<std::string> labels;
  InputNorm norm;
  TrainingMeta meta;
  try {
    cfg.input_h = static_cast<std::size_t>(header.get_int("input_h"));
    cfg.input_w = static_cast<std::size_t>(header.get_int("input_w"));
    cfg.channels_per_stage = parse_int_list(header.get("channels_per_stage"));
    cfg.blocks_per_stage = parse_int_list(header.get("blocks_per_stage"));
    cfg.stem_stride = static_cast<int>(header.get_int("stem_stride"));
    cfg.n_classes = static_cast<int>(header.get_int("n_classes"));
    cfg.seed = header.get_uint64("init_seed");
    labels = header.get_list("labels");
    norm.mean = header.get_double("norm_mean");
    norm.std = header.get_double("norm_std");
    meta.epochs = static_cast<int>(header.get_int("epochs"));
    meta.final_train_loss = header.get_double("final_train_loss");
    meta.seed = header.get_uint64("train_seed");
    cfg.validate();
  } catch (const Error& e) {
    throw FormatError(fmt::format("checkpoint header: {}", e.what()));
  }
  if (labels.size() != static_cast<std::size_t>(cfg.n_classes)) {
    throw FormatError(fmt::format("checkpoint has {} labels for {} classes", labels.size(), cfg.n_classes));
  }

  Checkpoint ckpt{Network<float>(cfg), std::move(labels), meta};
  ckpt.network.input_norm() = norm;
  const auto& names = ckpt.network.parameter_names();
  for (std::size_t i = 0; i < names.size(); ++i) {
    const auto name_len = in.u32("parameter name length");
    const auto name = in.take(name_len, "parameter name");
    if (name != names[i]) {
      throw FormatError(fmt::format("expected parameter `{}`, found `{}`", names[i], name));
    }
    auto& p = ckpt.network.parameters()[i];
    const auto rank = in.u32("parameter rank");
    Shape shape;
    for (std::uint32_t r = 0; r < rank; ++r) shape.push_back(in.u32("parameter extent"));
    if (shape != p.shape()) {
      throw FormatError(fmt::format("parameter `{}` has shape {}, expected {}", name,
                                    shape_string(shape), shape_string(p.shape())));
    }
    for (auto& v : p.values()) v = std::bit_cast<float>(in.u32("parameter payload"));
  }
  if (!in.done()) throw FormatError("trailing bytes after the last parameter block");
  return ckpt;
}

void save_checkpoint(const std::string& path, const Checkpoint& ckpt) {
  write_text_file(path, serialize_checkpoint(ckpt));
}

Checkpoint load_checkpoint(const std::string& path) {
  return deserialize_checkpoint(read_text_file(path));
}

}  // namespace spectrocam
