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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "oracles.hpp"
#include "spectrocam/corpus.hpp"
#include "spectrocam/error.hpp"
#include "spectrocam/keyvalue.hpp"

namespace spectrocam {
namespace {

AudioClip ramp_clip(std::size_t n, int sr) {
  AudioClip c;
  c.sample_rate = sr;
  c.source_id = "utt";
  for (std::size_t i = 0; i < n; ++i) c.samples.push_back(static_cast<double>(i) / static_cast<double>(n));
  return c;
}

// ---------------------------------------------------------------------------
// Alignment parsing and extraction

TEST(ParseAlignment, SingleRow) {
  const auto a = parse_alignment("start,end,phone\n0.10,0.25,i");
  ASSERT_EQ(a.size(), 1u);
  EXPECT_EQ(a[0], (SegmentAnnotation{0.10, 0.25, "i"}));
}

TEST(ParseAlignment, HeaderOnlyAndBlankLines) {
  EXPECT_TRUE(parse_alignment("start,end,phone\n").empty());
  const auto a = parse_alignment("\xEF\xBB\xBFstart,end,phone\r\n0,0.1,a\r\n\r\n0.1,0.3,b\n");
  ASSERT_EQ(a.size(), 2u);
  EXPECT_EQ(a[1].phone, "b");
}

TEST(ParseAlignment, InvertedIntervalReportsLine) {
  try {
    parse_alignment("start,end,phone\n0.3,0.2,u");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(ParseAlignment, MalformedRows) {
  const auto line_of = [](const std::string& text) -> std::size_t {
    try {
      parse_alignment(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  EXPECT_EQ(line_of("begin,end,phone\n"), 1u);
  EXPECT_EQ(line_of("start,end,phone\n0,0.1,a\n0.1,x,b\n"), 3u);
  EXPECT_EQ(line_of("start,end,phone\n0,0.1\n"), 2u);
  EXPECT_EQ(line_of("start,end,phone\n0,0.1,a,extra\n"), 2u);
  EXPECT_EQ(line_of("start,end,phone\n0,0.1,\n"), 2u);
  EXPECT_EQ(line_of("start,end,phone\n0.2,0.2,a\n"), 2u);
}

TEST(ExtractSegments, FullSpan) {
  const auto clip = ramp_clip(16000, 16000);
  const std::vector<SegmentAnnotation> ann{{0.0, 1.0, "i"}};
  const auto out = extract_segments(clip, ann, {"i"});
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].samples, clip.samples);
  EXPECT_EQ(out[0].label, "i");
  EXPECT_EQ(out[0].sample_rate, 16000);
}

TEST(ExtractSegments, KeepFilterAndDisjointKeep) {
  const auto clip = ramp_clip(16000, 16000);
  const std::vector<SegmentAnnotation> ann{{0.0, 0.2, "i"}, {0.2, 0.5, "s"}, {0.5, 0.9, "i"}};
  EXPECT_EQ(extract_segments(clip, ann, {"i"}).size(), 2u);
  EXPECT_TRUE(extract_segments(clip, ann, {"aa"}).empty());
  EXPECT_TRUE(extract_segments(clip, ann, {}).empty());
}

TEST(ExtractSegments, OutOfRangeNamesAnnotation) {
  const auto clip = ramp_clip(16000, 16000);
  const std::vector<SegmentAnnotation> ann{{0.0, 0.2, "i"}, {0.5, 2.0, "u"}};
  try {
    extract_segments(clip, ann, {"i", "u"});
    FAIL() << "expected RangeError";
  } catch (const RangeError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("u"), std::string::npos);
    EXPECT_NE(msg.find('1'), std::string::npos);
  }
}

TEST(ExtractSegments, LengthIsRoundedDuration) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const int sr : {8000, 16000, 22050, 44100}) {
    const auto clip = ramp_clip(static_cast<std::size_t>(sr) * 2, sr);
    for (int trial = 0; trial < 200; ++trial) {
      double a = u(rng) * 1.9, b = u(rng) * 1.9;
      if (a > b) std::swap(a, b);
      if (std::llround((b - a) * sr) < 1) continue;
      const std::vector<SegmentAnnotation> ann{{a, b, "x"}};
      const auto out = extract_segments(clip, ann, {"x"});
      ASSERT_EQ(out.size(), 1u);
      EXPECT_EQ(out[0].samples.size(), static_cast<std::size_t>(std::llround((b - a) * sr)));
      const auto first = static_cast<std::size_t>(std::llround(a * sr));
      EXPECT_EQ(out[0].samples.front(), clip.samples[first]);
    }
  }
}

// ---------------------------------------------------------------------------
// Synthesizer tables

TEST(SynthSpec, DefaultTablesCarryTheVowelFirstFormants) {
  const auto spec = default_synth_spec();
  const std::map<std::string, double> f1{{"i", 385}, {"u", 400}, {"ae", 800}, {"er", 590}, {"aa", 710}};
  ASSERT_EQ(spec.vowels.size(), 5u);
  for (const auto& v : spec.vowels) {
    EXPECT_EQ(v.formants[0], f1.at(v.name)) << v.name;
    EXPECT_NO_THROW(v.validate());
    for (std::size_t i = 1; i < 4; ++i) EXPECT_LT(v.formants[i - 1], v.formants[i]);
    EXPECT_EQ(v.bandwidths, (std::array<double, 4>{60, 90, 120, 150}));
  }
  std::vector<std::string> names;
  for (const auto& c : spec.consonants) {
    names.push_back(c.name);
    EXPECT_NO_THROW(c.validate(11025.0));
  }
  EXPECT_EQ(names, (std::vector<std::string>{"p", "t", "k", "f", "s", "tsh", "sh", "th"}));
  EXPECT_EQ(spec.formant_jitter, 0.05);
}

TEST(SynthSpec, ShippedFileMatchesBuiltIn) {
  const auto text = read_text_file(std::string(SPECTROCAM_DATA_DIR) + "/synth_spec.cfg");
  EXPECT_EQ(parse_synth_spec(text), default_synth_spec());
}

TEST(SynthSpec, FormatParseRoundTrip) {
  auto spec = default_synth_spec();
  spec.formant_jitter = 0.02;
  spec.vowels[1].formants[2] = 2250.5;
  spec.consonants[3].burst = true;
  EXPECT_EQ(parse_synth_spec(format_synth_spec(spec)), spec);
}

TEST(SynthSpec, InvalidEntries) {
  VowelSpec v = default_synth_spec().vowels[0];
  v.formants = {900, 800, 2000, 3000};
  EXPECT_THROW(v.validate(), InvalidInput);
  v = default_synth_spec().vowels[0];
  v.f0 = {200, 100};
  EXPECT_THROW(v.validate(), InvalidInput);
  ConsonantSpec c = default_synth_spec().consonants[0];
  c.noise_band = {3000, 2000};
  EXPECT_THROW(c.validate(11025), InvalidInput);
  c.noise_band = {1000, 12000};
  EXPECT_THROW(c.validate(11025), InvalidInput);
  EXPECT_THROW(parse_synth_spec("vowel.i.formants = 1, 2\n"), Error);
  EXPECT_THROW(parse_synth_spec("bogus = 1\n"), Error);
}

TEST(SynthVowel, RejectsArgumentsOutsideSpec) {
  const auto v = default_synth_spec().vowel("i");
  EXPECT_THROW(synth_vowel(v, 50.0, 0.2, 22050, 1), InvalidInput);
  EXPECT_THROW(synth_vowel(v, 150.0, 1.0, 22050, 1), InvalidInput);
  EXPECT_THROW(synth_vowel(v, 150.0, 0.2, 0, 1), InvalidInput);
}

TEST(SynthVowel, DeterministicAndNormalized) {
  const auto v = default_synth_spec().vowel("ae");
  const auto a = synth_vowel(v, 120.0, 0.2, 22050, 99);
  const auto b = synth_vowel(v, 120.0, 0.2, 22050, 99);
  const auto c = synth_vowel(v, 120.0, 0.2, 22050, 100);
  EXPECT_EQ(a.samples, b.samples);
  EXPECT_NE(a.samples, c.samples);
  EXPECT_EQ(a.samples.size(), static_cast<std::size_t>(std::llround(0.2 * 22050)));
  double peak = 0.0;
  for (const double s : a.samples) peak = std::max(peak, std::abs(s));
  EXPECT_NEAR(peak, kPeakLevel, 1e-12);
  EXPECT_EQ(a.label, "ae");
}

bool near_any(const std::vector<double>& peaks, double target, double tol) {
  return std::any_of(peaks.begin(), peaks.end(),
                     [&](double p) { return std::abs(p - target) <= tol; });
}

TEST(SynthVowel, AeEnvelopePeakNearF1) {
  const auto v = default_synth_spec().vowel("ae");
  const auto clip = synth_vowel(v, 120.0, 0.3, 22050, 1);
  EXPECT_TRUE(near_any(oracle::envelope_peaks(clip.samples, 22050, 4000.0), 800.0, 50.0));
}

TEST(SynthVowel, IEnvelopePeakNearF1) {
  const auto v = default_synth_spec().vowel("i");
  const auto clip = synth_vowel(v, 150.0, 0.3, 22050, 1);
  EXPECT_TRUE(near_any(oracle::envelope_peaks(clip.samples, 22050, 4000.0), 385.0, 50.0));
}

TEST(SynthVowel, FirstFormantAcrossSeeds) {
  const auto spec = default_synth_spec();
  for (const auto& v : spec.vowels) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      std::mt19937_64 rng(seed);
      const double f0 = std::uniform_real_distribution<double>(v.f0.lo, v.f0.hi)(rng);
      const double dur = std::uniform_real_distribution<double>(v.duration.lo, v.duration.hi)(rng);
      const auto clip = synth_vowel(v, f0, dur, 22050, seed);
      const auto peaks = oracle::envelope_peaks(clip.samples, 22050, 4500.0);
      EXPECT_TRUE(near_any(peaks, v.formants[0], 50.0)) << v.name << " seed " << seed << " f0 " << f0;
    }
  }
}

// Every formant, not just F1, shows up in the envelope.
TEST(SynthVowel, AllFormantsAcrossSeeds) {
  const auto spec = default_synth_spec();
  for (const auto& v : spec.vowels) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto clip = synth_vowel(v, 100.0, 0.3, 22050, seed);
      const auto peaks = oracle::envelope_peaks(clip.samples, 22050, 4500.0);
      for (std::size_t f = 0; f < 4; ++f) {
        EXPECT_TRUE(near_any(peaks, v.formants[f], 50.0)) << v.name << " F" << f + 1 << " seed " << seed;
      }
    }
  }
}

TEST(SynthVowel, VowelsArePeriodic) {
  const auto spec = default_synth_spec();
  for (const auto& v : spec.vowels) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto clip = sample_vowel(v, spec.formant_jitter, 22050, seed);
      EXPECT_GT(oracle::max_normalized_autocorr(clip.samples, 22050 / 400, 22050 / 50), 0.5)
          << v.name << " seed " << seed;
    }
  }
}

TEST(SynthUnvoiced, SibilantEnergyAboveFourKilohertz) {
  const auto s = default_synth_spec().consonant("s");
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto clip = synth_unvoiced(s, 0.2, 22050, seed);
    EXPECT_GE(oracle::energy_fraction_above(clip.samples, 22050, 4000.0), 0.7) << seed;
  }
}

TEST(SynthUnvoiced, AperiodicAndDeterministic) {
  const auto spec = default_synth_spec();
  for (const auto& c : spec.consonants) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto clip = sample_unvoiced(c, 22050, seed);
      EXPECT_LT(oracle::max_normalized_autocorr(clip.samples, 22050 / 400, 22050 / 50), 0.5)
          << c.name << " seed " << seed;
      EXPECT_EQ(clip.samples, sample_unvoiced(c, 22050, seed).samples);
      EXPECT_NO_THROW(clip.validate());
    }
  }
}

TEST(SynthUnvoiced, InvalidBandRejected) {
  ConsonantSpec c{"x", {5000, 4000}, false, {0.1, 0.2}};
  EXPECT_THROW(synth_unvoiced(c, 0.15, 22050, 1), InvalidInput);
  c.noise_band = {1000, 20000};
  EXPECT_THROW(synth_unvoiced(c, 0.15, 22050, 1), InvalidInput);
}

TEST(SampleVowel, DrawsWithinRanges) {
  const auto spec = default_synth_spec();
  const auto& v = spec.vowel("u");
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto clip = sample_vowel(v, 0.05, 22050, seed);
    EXPECT_TRUE(v.duration.contains(clip.duration() + 0.5 / 22050) ||
                v.duration.contains(clip.duration() - 0.5 / 22050));
    EXPECT_EQ(clip.samples, sample_vowel(v, 0.05, 22050, seed).samples);
  }
}

TEST(DeriveSeed, DistinctAndStable) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(derive_seed(7, i));
  EXPECT_EQ(seen.size(), 1000u);
  EXPECT_EQ(derive_seed(7, 3), derive_seed(7, 3));
  EXPECT_NE(derive_seed(7, 3), derive_seed(8, 3));
}

// ---------------------------------------------------------------------------
// Manifests

std::vector<LabeledPath> items(const std::map<std::string, int>& per_label) {
  std::vector<LabeledPath> out;
  for (const auto& [label, n] : per_label) {
    for (int i = 0; i < n; ++i) out.push_back({label + "/" + std::to_string(i) + ".wav", label});
  }
  return out;
}

std::map<std::string, std::pair<int, int>> split_counts(const DatasetManifest& m) {
  std::map<std::string, std::pair<int, int>> out;
  for (const auto& e : m.entries) {
    auto& c = out[e.label];
    (e.split == Split::kTrain ? c.first : c.second)++;
  }
  return out;
}

TEST(BuildManifest, ExactSplitPerClass) {
  const auto m = build_manifest(items({{"a", 100}, {"b", 100}, {"c", 100}}), {"a", "b", "c"}, 0.7, 7);
  for (const auto& [label, c] : split_counts(m)) {
    EXPECT_EQ(c.first, 70) << label;
    EXPECT_EQ(c.second, 30) << label;
  }
  const auto ten = build_manifest(items({{"a", 10}}), {"a"}, 0.7, 1);
  EXPECT_EQ(split_counts(ten)["a"], std::make_pair(7, 3));
}

TEST(BuildManifest, DeterministicAndSeedSensitive) {
  const auto in = items({{"a", 50}, {"b", 50}});
  const auto m1 = build_manifest(in, {"a", "b"}, 0.7, 3);
  EXPECT_EQ(m1, build_manifest(in, {"a", "b"}, 0.7, 3));
  std::set<std::vector<Split>> patterns;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    std::vector<Split> p;
    for (const auto& e : build_manifest(in, {"a", "b"}, 0.7, seed).entries) p.push_back(e.split);
    patterns.insert(p);
  }
  EXPECT_EQ(patterns.size(), 10u);
}

TEST(BuildManifest, StratificationAndOrder) {
  const auto in = items({{"a", 37}, {"b", 91}, {"c", 12}});
  const auto m = build_manifest(in, {"c", "b", "a"}, 0.7, 5);
  ASSERT_EQ(m.entries.size(), in.size());
  for (std::size_t i = 0; i < in.size(); ++i) EXPECT_EQ(m.entries[i].path, in[i].path);
  const auto train = m.split(Split::kTrain);
  const auto test = m.split(Split::kTest);
  EXPECT_EQ(train.size() + test.size(), in.size());
  std::map<std::string, double> overall, in_train;
  for (const auto& e : m.entries) overall[e.label] += 1.0 / static_cast<double>(m.entries.size());
  for (const auto& e : train) in_train[e.label] += 1.0 / static_cast<double>(train.size());
  for (const auto& [label, p] : overall) EXPECT_NEAR(in_train[label], p, 0.05) << label;
  EXPECT_EQ(m.label_set, (std::vector<std::string>{"c", "b", "a"}));
}

TEST(BuildManifest, Errors) {
  EXPECT_THROW(build_manifest(items({{"a", 3}}), {"b"}, 0.7, 1), InvalidInput);
  EXPECT_THROW(build_manifest(items({{"a", 3}}), {"a"}, 0.0, 1), InvalidInput);
  EXPECT_THROW(build_manifest(items({{"a", 3}}), {"a"}, 1.0, 1), InvalidInput);
}

TEST(BuildManifest, FromClipsUsesSourceIds) {
  std::vector<AudioClip> clips(4);
  for (std::size_t i = 0; i < clips.size(); ++i) {
    clips[i].label = i % 2 ? "b" : "a";
    clips[i].source_id = "clip" + std::to_string(i);
    clips[i].samples = {0.0};
  }
  const auto m = build_manifest(clips, {"a", "b"}, 0.5, 2);
  ASSERT_EQ(m.entries.size(), 4u);
  EXPECT_EQ(m.entries[3].path, "clip3");
  EXPECT_EQ(m.entries[3].label, "b");
}

TEST(ManifestFormat, RoundTripAndLayout) {
  const auto m = build_manifest(items({{"a", 4}, {"b", 3}}), {"b", "a"}, 0.7, 11);
  const auto text = format_manifest(m);
  EXPECT_EQ(text.rfind("# label_set = b,a\n# seed = 11\npath,label,split\n", 0), 0u);
  EXPECT_EQ(parse_manifest(text), m);
}

TEST(ManifestFormat, Errors) {
  EXPECT_THROW(parse_manifest("path,label,split\na.wav,a,train\n"), Error);
  EXPECT_THROW(parse_manifest("# label_set = a\n# seed = 1\npath,label,split\na.wav,a,validation\n"), ParseError);
  EXPECT_THROW(parse_manifest("# label_set = a\n# seed = 1\npath,label,split\na.wav,z,train\n"), Error);
  EXPECT_THROW(read_manifest("/nonexistent/manifest.csv"), IoError);
}

TEST(SubsamplePerLabel, CapsAndKeepsOrder) {
  std::vector<AudioClip> clips;
  for (int i = 0; i < 30; ++i) {
    AudioClip c;
    c.label = i < 20 ? "s" : "v";
    c.source_id = std::to_string(i);
    clips.push_back(c);
  }
  const auto out = subsample_per_label(clips, 8, 3);
  std::map<std::string, int> counts;
  int last = -1;
  for (const auto& c : out) {
    ++counts[c.label];
    EXPECT_GT(std::stoi(c.source_id), last);
    last = std::stoi(c.source_id);
  }
  EXPECT_EQ(counts["s"], 8);
  EXPECT_EQ(counts["v"], 8);
  EXPECT_EQ(subsample_per_label(clips, 8, 3).size(), out.size());
  EXPECT_EQ(subsample_per_label(clips, 100, 3).size(), 30u);
}

}  // namespace
}  // namespace spectrocam
