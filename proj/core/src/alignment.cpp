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

#include <cmath>

#include <fmt/format.h>

#include "spectrocam/corpus.hpp"
#include "spectrocam/error.hpp"
#include "spectrocam/keyvalue.hpp"

namespace spectrocam {
namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  while (true) {
    const auto comma = line.find(',');
    fields.push_back(trim(line.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    line.remove_prefix(comma + 1);
  }
  return fields;
}

}  // namespace

std::vector<SegmentAnnotation> parse_alignment(std::string_view text) {
  if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);

  std::vector<SegmentAnnotation> out;
  std::size_t line_no = 0;
  bool seen_header = false;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;

    if (!seen_header) {
      const auto fields = split_fields(line);
      if (fields.size() != 3 || fields[0] != "start" || fields[1] != "end" ||
          fields[2] != "phone") {
        throw ParseError(line_no, "expected header `start,end,phone`");
      }
      seen_header = true;
      continue;
    }
    if (line.empty()) continue;

    const auto fields = split_fields(line);
    if (fields.size() != 3) {
      throw ParseError(line_no, fmt::format("expected 3 fields, got {}", fields.size()));
    }
    SegmentAnnotation seg;
    try {
      seg.start = parse_double(fields[0]);
      seg.end = parse_double(fields[1]);
    } catch (const InvalidInput& e) {
      throw ParseError(line_no, e.what());
    }
    seg.phone = std::string(fields[2]);
    if (!std::isfinite(seg.start) || !std::isfinite(seg.end) || seg.start < 0.0) {
      throw ParseError(line_no, "times must be finite and non-negative");
    }
    if (seg.start >= seg.end) {
      throw ParseError(line_no, fmt::format("start {} is not before end {}", fields[0], fields[1]));
    }
    if (seg.phone.empty()) throw ParseError(line_no, "empty phone label");
    out.push_back(std::move(seg));
  }
  if (!seen_header) throw ParseError(1, "expected header `start,end,phone`");
  return out;
}

std::vector<AudioClip> extract_segments(const AudioClip& clip,
                                        std::span<const SegmentAnnotation> annotations,
                                        const std::set<std::string>& keep) {
  clip.validate();
  const double sr = clip.sample_rate;
  std::vector<AudioClip> out;
  for (std::size_t i = 0; i < annotations.size(); ++i) {
    const auto& seg = annotations[i];
    const auto first = static_cast<long long>(std::llround(seg.start * sr));
    const auto length = static_cast<long long>(std::llround((seg.end - seg.start) * sr));
    const auto describe = [&] {
      return fmt::format("annotation {} ({}, {}, {})", i, seg.start, seg.end, seg.phone);
    };
    if (first < 0 || first + length > static_cast<long long>(clip.samples.size())) {
      throw RangeError(fmt::format("{} exceeds clip length {:.6f} s", describe(), clip.duration()));
    }
    if (!keep.count(seg.phone)) continue;
    if (length <= 0) throw RangeError(fmt::format("{} is shorter than one sample", describe()));

    AudioClip piece;
    piece.sample_rate = clip.sample_rate;
    piece.label = seg.phone;
    piece.source_id = fmt::format("{}#{}", clip.source_id, i);
    piece.samples.assign(clip.samples.begin() + first, clip.samples.begin() + first + length);
    out.push_back(std::move(piece));
  }
  return out;
}

}  // namespace spectrocam
