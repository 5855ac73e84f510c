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

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include <fmt/format.h>

#include "spectrocam/corpus.hpp"
#include "spectrocam/error.hpp"
#include "spectrocam/keyvalue.hpp"

namespace spectrocam {

std::string_view split_name(Split s) { return s == Split::kTrain ? "train" : "test"; }

std::vector<ManifestEntry> DatasetManifest::split(Split s) const {
  std::vector<ManifestEntry> out;
  std::copy_if(entries.begin(), entries.end(), std::back_inserter(out),
               [s](const ManifestEntry& e) { return e.split == s; });
  return out;
}

DatasetManifest build_manifest(std::span<const LabeledPath> items,
                               const std::vector<std::string>& label_set,
                               double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw InvalidInput(fmt::format("train_fraction must lie in (0, 1), got {}", train_fraction));
  }
  std::map<std::string, std::vector<std::size_t>> by_label;
  for (const auto& label : label_set) by_label[label];
  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto it = by_label.find(items[i].label);
    if (it == by_label.end()) {
      throw InvalidInput(fmt::format("label `{}` of {} is not in the label set", items[i].label,
                                     items[i].path));
    }
    it->second.push_back(i);
  }

  DatasetManifest manifest;
  manifest.label_set = label_set;
  manifest.seed = seed;
  manifest.entries.resize(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    manifest.entries[i] = {items[i].path, items[i].label, Split::kTest};
  }
  // One generator per class so a class's split does not depend on the others.
  for (std::size_t c = 0; c < label_set.size(); ++c) {
    auto indices = by_label[label_set[c]];
    std::mt19937_64 rng(derive_seed(seed, c));
    std::shuffle(indices.begin(), indices.end(), rng);
    const auto n_train = static_cast<std::size_t>(
        std::llround(static_cast<double>(indices.size()) * train_fraction));
    for (std::size_t k = 0; k < n_train; ++k) manifest.entries[indices[k]].split = Split::kTrain;
  }
  return manifest;
}

DatasetManifest build_manifest(std::span<const AudioClip> clips,
                               const std::vector<std::string>& label_set,
                               double train_fraction, std::uint64_t seed) {
  std::vector<LabeledPath> items;
  items.reserve(clips.size());
  for (const auto& clip : clips) items.push_back({clip.source_id, clip.label});
  return build_manifest(items, label_set, train_fraction, seed);
}

std::string format_manifest(const DatasetManifest& manifest) {
  std::string out;
  out += fmt::format("# label_set = {}\n", join(manifest.label_set, ","));
  out += fmt::format("# seed = {}\n", manifest.seed);
  out += "path,label,split\n";
  for (const auto& e : manifest.entries) {
    out += fmt::format("{},{},{}\n", e.path, e.label, split_name(e.split));
  }
  return out;
}

DatasetManifest parse_manifest(std::string_view text) {
  DatasetManifest manifest;
  std::size_t line_no = 0;
  bool have_labels = false, have_seed = false, seen_header = false;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty()) continue;

    if (line.front() == '#') {
      if (seen_header) continue;
      const auto body = line.substr(1);
      const auto eq = body.find('=');
      if (eq == std::string_view::npos) continue;
      const auto key = trim(body.substr(0, eq));
      const auto value = trim(body.substr(eq + 1));
      if (key == "label_set") {
        manifest.label_set = split_list(value);
        have_labels = true;
      } else if (key == "seed") {
        try {
          manifest.seed = parse_uint64(value);
        } catch (const InvalidInput& e) {
          throw ParseError(line_no, e.what());
        }
        have_seed = true;
      }
      continue;
    }
    if (!seen_header) {
      if (line != "path,label,split") throw ParseError(line_no, "expected header `path,label,split`");
      seen_header = true;
      continue;
    }

    const auto c1 = line.find(',');
    const auto c2 = line.rfind(',');
    if (c1 == std::string_view::npos || c1 == c2) {
      throw ParseError(line_no, "expected `path,label,split`");
    }
    ManifestEntry e;
    e.path = std::string(trim(line.substr(0, c1)));
    e.label = std::string(trim(line.substr(c1 + 1, c2 - c1 - 1)));
    const auto split = trim(line.substr(c2 + 1));
    if (split == "train") {
      e.split = Split::kTrain;
    } else if (split == "test") {
      e.split = Split::kTest;
    } else {
      throw ParseError(line_no, fmt::format("unknown split `{}`", split));
    }
    if (have_labels &&
        std::find(manifest.label_set.begin(), manifest.label_set.end(), e.label) ==
            manifest.label_set.end()) {
      throw ParseError(line_no, fmt::format("label `{}` not in label_set", e.label));
    }
    manifest.entries.push_back(std::move(e));
  }
  if (!have_labels || !have_seed) throw ParseError(1, "missing `# label_set` or `# seed` preamble");
  if (!seen_header) throw ParseError(line_no, "missing header `path,label,split`");
  return manifest;
}

DatasetManifest read_manifest(const std::string& path) {
  try {
    return parse_manifest(read_text_file(path));
  } catch (const ParseError& e) {
    throw ParseError(e.line(), fmt::format("{}: {}", path, e.detail()));
  }
}

void write_manifest(const std::string& path, const DatasetManifest& manifest) {
  write_text_file(path, format_manifest(manifest));
}

std::vector<AudioClip> subsample_per_label(std::vector<AudioClip> clips, std::size_t cap,
                                           std::uint64_t seed) {
  std::map<std::string, std::vector<std::size_t>> by_label;
  for (std::size_t i = 0; i < clips.size(); ++i) by_label[clips[i].label].push_back(i);

  std::vector<bool> keep(clips.size(), false);
  std::uint64_t stream = 0;
  for (auto& [label, indices] : by_label) {
    std::mt19937_64 rng(derive_seed(seed, stream++));
    std::shuffle(indices.begin(), indices.end(), rng);
    for (std::size_t k = 0; k < std::min(cap, indices.size()); ++k) keep[indices[k]] = true;
  }
  std::vector<AudioClip> out;
  for (std::size_t i = 0; i < clips.size(); ++i) {
    if (keep[i]) out.push_back(std::move(clips[i]));
  }
  return out;
}

}  // namespace spectrocam
