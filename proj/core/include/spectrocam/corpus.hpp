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

#include <array>
#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "spectrocam/signal.hpp"

namespace spectrocam {

// ---------------------------------------------------------------------------
// Alignment-driven extraction

// One aligned phone: [start, end) in seconds.
struct SegmentAnnotation {
  double start = 0.0;
  double end = 0.0;
  std::string phone;

  friend bool operator==(const SegmentAnnotation&, const SegmentAnnotation&) = default;
};

// Parses the alignment CSV: header `start,end,phone`, one segment per row.
// Errors carry the 1-based line number (the header is line 1).
std::vector<SegmentAnnotation> parse_alignment(std::string_view text);

// Cuts one clip per annotation whose phone is in `keep`. A segment starts at
// sample round(start * sr) and spans round((end - start) * sr) samples.
// Throws RangeError when a segment runs past the end of the clip.
std::vector<AudioClip> extract_segments(const AudioClip& clip,
                                        std::span<const SegmentAnnotation> annotations,
                                        const std::set<std::string>& keep);

// ---------------------------------------------------------------------------
// Synthesis specs

struct Range {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double v) const { return v >= lo && v <= hi; }
  friend bool operator==(const Range&, const Range&) = default;
};

struct VowelSpec {
  std::string name;
  std::array<double, 4> formants{};    // F1..F4, Hz
  std::array<double, 4> bandwidths{};  // B1..B4, Hz
  Range duration{0.12, 0.35};          // seconds
  Range f0{100.0, 220.0};              // Hz

  void validate() const;
  friend bool operator==(const VowelSpec&, const VowelSpec&) = default;
};

struct ConsonantSpec {
  std::string name;
  Range noise_band;  // Hz
  bool burst = false;
  Range duration{0.08, 0.25};

  // nyquist bounds noise_band.hi.
  void validate(double nyquist) const;
  friend bool operator==(const ConsonantSpec&, const ConsonantSpec&) = default;
};

// Everything the synthetic corpus generator needs to know about its classes.
struct SynthSpec {
  std::vector<VowelSpec> vowels;
  std::vector<ConsonantSpec> consonants;
  double formant_jitter = 0.05;  // relative, uniform in [-j, +j]

  const VowelSpec& vowel(std::string_view name) const;
  const ConsonantSpec& consonant(std::string_view name) const;
  friend bool operator==(const SynthSpec&, const SynthSpec&) = default;
};

// Built-in tables for the five vowels (i, u, ae, er, aa) and the eight
// unvoiced consonants (p, t, k, f, s, tsh, sh, th). Identical to the shipped
// data/synth_spec.cfg.
SynthSpec default_synth_spec();

SynthSpec parse_synth_spec(std::string_view text);
std::string format_synth_spec(const SynthSpec& spec);

// ---------------------------------------------------------------------------
// Synthesis

// Impulse train at f0 through a cascade of four second-order resonators at
// spec.formants / spec.bandwidths, peak-normalized to kPeakLevel. The seed
// drives the pitch-period jitter and the phase of the first pulse.
AudioClip synth_vowel(const VowelSpec& spec, double f0, double duration, int sample_rate,
                      std::uint64_t seed);

// White noise shaped to spec.noise_band, with a decaying onset burst when
// spec.burst is set. Peak-normalized to kPeakLevel.
AudioClip synth_unvoiced(const ConsonantSpec& spec, double duration, int sample_rate,
                         std::uint64_t seed);

inline constexpr double kPeakLevel = 0.9;

// Draws f0, duration and formant jitter from `seed`, then calls synth_vowel.
AudioClip sample_vowel(const VowelSpec& spec, double formant_jitter, int sample_rate,
                       std::uint64_t seed);
AudioClip sample_unvoiced(const ConsonantSpec& spec, int sample_rate, std::uint64_t seed);

// Per-item seed derived from a base seed; independent of generation order.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

// ---------------------------------------------------------------------------
// Manifests

enum class Split { kTrain, kTest };

std::string_view split_name(Split s);

struct ManifestEntry {
  std::string path;
  std::string label;
  Split split = Split::kTrain;

  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

struct DatasetManifest {
  std::vector<ManifestEntry> entries;
  std::vector<std::string> label_set;
  std::uint64_t seed = 0;

  std::vector<ManifestEntry> split(Split s) const;
  friend bool operator==(const DatasetManifest&, const DatasetManifest&) = default;
};

struct LabeledPath {
  std::string path;
  std::string label;
};

// Stratified shuffle split: within each class, a seeded permutation puts the
// first round(n * train_fraction) items in the train split. Entry order
// follows the input order.
DatasetManifest build_manifest(std::span<const LabeledPath> items,
                               const std::vector<std::string>& label_set,
                               double train_fraction, std::uint64_t seed);

// Same, using each clip's source_id as its path.
DatasetManifest build_manifest(std::span<const AudioClip> clips,
                               const std::vector<std::string>& label_set,
                               double train_fraction, std::uint64_t seed);

// CSV with a `# key = value` preamble (label_set, seed) and header
// `path,label,split`.
std::string format_manifest(const DatasetManifest& manifest);
DatasetManifest parse_manifest(std::string_view text);

DatasetManifest read_manifest(const std::string& path);
void write_manifest(const std::string& path, const DatasetManifest& manifest);

// Uniform random subsample keeping at most `cap` clips per label, preserving
// the input order of the survivors.
std::vector<AudioClip> subsample_per_label(std::vector<AudioClip> clips, std::size_t cap,
                                           std::uint64_t seed);

}  // namespace spectrocam
