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
#include <complex>
#include <map>
#include <numbers>
#include <random>

#include <fmt/format.h>
#include <unsupported/Eigen/FFT>

#include "spectrocam/corpus.hpp"
#include "spectrocam/error.hpp"
#include "spectrocam/keyvalue.hpp"

namespace spectrocam {
namespace {

constexpr double kPeriodJitter = 0.005;  // relative, per pitch period
constexpr double kVowelFade = 0.005;     // seconds
constexpr double kNoiseFloorDb = -30.0;  // out-of-band level for unvoiced noise
constexpr double kNoiseTransitionHz = 300.0;
constexpr double kBurstDecay = 0.012;  // seconds

// Second-order digital resonator with unity gain at DC.
class Resonator {
 public:
  Resonator(double freq, double bandwidth, double sample_rate) {
    const double t = 1.0 / sample_rate;
    c_ = -std::exp(-2.0 * std::numbers::pi * bandwidth * t);
    b_ = 2.0 * std::exp(-std::numbers::pi * bandwidth * t) *
         std::cos(2.0 * std::numbers::pi * freq * t);
    a_ = 1.0 - b_ - c_;
  }

  double operator()(double x) {
    const double y = a_ * x + b_ * y1_ + c_ * y2_;
    y2_ = y1_;
    y1_ = y;
    return y;
  }

 private:
  double a_, b_, c_;
  double y1_ = 0.0, y2_ = 0.0;
};

void peak_normalize(std::vector<double>& x) {
  double peak = 0.0;
  for (const double v : x) peak = std::max(peak, std::abs(v));
  if (peak > 0.0) {
    for (double& v : x) v *= kPeakLevel / peak;
  }
}

double raised_cosine(double t, double ramp) {
  if (ramp <= 0.0 || t >= ramp) return 1.0;
  return 0.5 - 0.5 * std::cos(std::numbers::pi * t / ramp);
}

std::size_t sample_count(double duration, int sample_rate) {
  return static_cast<std::size_t>(std::max<long long>(1, std::llround(duration * sample_rate)));
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

Range parse_range(const std::string& text, const std::string& key) {
  const auto parts = split_list(text);
  if (parts.size() != 2) throw ConfigError(fmt::format("`{}` needs two values", key));
  return {parse_double(parts[0]), parse_double(parts[1])};
}

}  // namespace

void VowelSpec::validate() const {
  for (std::size_t i = 0; i < 4; ++i) {
    if (!(formants[i] > 0.0) || !(bandwidths[i] > 0.0)) {
      throw InvalidInput(fmt::format("vowel {}: formants and bandwidths must be positive", name));
    }
    if (i > 0 && !(formants[i - 1] < formants[i])) {
      throw InvalidInput(fmt::format("vowel {}: formants must be strictly increasing", name));
    }
  }
  if (!(duration.lo > 0.0 && duration.lo <= duration.hi)) {
    throw InvalidInput(fmt::format("vowel {}: invalid duration range", name));
  }
  if (!(f0.lo > 0.0 && f0.lo <= f0.hi)) {
    throw InvalidInput(fmt::format("vowel {}: invalid f0 range", name));
  }
}

void ConsonantSpec::validate(double nyquist) const {
  if (!(noise_band.lo >= 0.0 && noise_band.lo < noise_band.hi && noise_band.hi <= nyquist)) {
    throw InvalidInput(fmt::format("consonant {}: noise band [{}, {}] not within [0, {}]", name,
                                   noise_band.lo, noise_band.hi, nyquist));
  }
  if (!(duration.lo > 0.0 && duration.lo <= duration.hi)) {
    throw InvalidInput(fmt::format("consonant {}: invalid duration range", name));
  }
}

const VowelSpec& SynthSpec::vowel(std::string_view name) const {
  for (const auto& v : vowels) {
    if (v.name == name) return v;
  }
  throw ConfigError(fmt::format("unknown vowel `{}`", name));
}

const ConsonantSpec& SynthSpec::consonant(std::string_view name) const {
  for (const auto& c : consonants) {
    if (c.name == name) return c;
  }
  throw ConfigError(fmt::format("unknown consonant `{}`", name));
}

SynthSpec default_synth_spec() {
  SynthSpec spec;
  const std::array<double, 4> bw{60.0, 90.0, 120.0, 150.0};
  // F1 values are the measured first formants; F2..F4 are typical adult
  // American English values.
  spec.vowels = {
      {"i", {385.0, 2290.0, 3010.0, 3600.0}, bw, {0.12, 0.35}, {100.0, 220.0}},
      {"u", {400.0, 870.0, 2240.0, 3300.0}, bw, {0.12, 0.35}, {100.0, 220.0}},
      {"ae", {800.0, 1660.0, 2410.0, 3400.0}, bw, {0.12, 0.35}, {100.0, 220.0}},
      {"er", {590.0, 1350.0, 1690.0, 3300.0}, bw, {0.12, 0.35}, {100.0, 220.0}},
      {"aa", {710.0, 1090.0, 2440.0, 3400.0}, bw, {0.12, 0.35}, {100.0, 220.0}},
  };
  spec.consonants = {
      {"p", {300.0, 3500.0}, true, {0.06, 0.18}},
      {"t", {2500.0, 8000.0}, true, {0.06, 0.18}},
      {"k", {1500.0, 4500.0}, true, {0.06, 0.18}},
      {"f", {1000.0, 9000.0}, false, {0.10, 0.30}},
      {"s", {4000.0, 10000.0}, false, {0.10, 0.30}},
      {"tsh", {2000.0, 7000.0}, true, {0.08, 0.22}},
      {"sh", {1800.0, 6500.0}, false, {0.10, 0.30}},
      {"th", {1200.0, 9500.0}, false, {0.10, 0.30}},
  };
  spec.formant_jitter = 0.05;
  return spec;
}

SynthSpec parse_synth_spec(std::string_view text) {
  const auto entries = parse_key_values(text);
  SynthSpec spec;
  std::map<std::string, std::map<std::string, std::string>> vowels, consonants;
  std::vector<std::string> vowel_order, consonant_order;

  for (const auto& kv : entries) {
    if (kv.key == "formant_jitter") {
      spec.formant_jitter = parse_double(kv.value);
      continue;
    }
    const auto first_dot = kv.key.find('.');
    const auto last_dot = kv.key.rfind('.');
    if (first_dot == std::string::npos || first_dot == last_dot) {
      throw ParseError(kv.line, fmt::format("unknown key `{}`", kv.key));
    }
    const auto kind = kv.key.substr(0, first_dot);
    const auto name = kv.key.substr(first_dot + 1, last_dot - first_dot - 1);
    const auto field = kv.key.substr(last_dot + 1);
    auto* table = kind == "vowel" ? &vowels : kind == "consonant" ? &consonants : nullptr;
    if (table == nullptr) throw ParseError(kv.line, fmt::format("unknown key `{}`", kv.key));
    auto& order = kind == "vowel" ? vowel_order : consonant_order;
    if (!table->count(name)) order.push_back(name);
    (*table)[name][field] = kv.value;
  }

  const auto require = [](const std::map<std::string, std::string>& fields,
                          const std::string& prefix, const std::string& field) {
    const auto it = fields.find(field);
    if (it == fields.end()) throw ConfigError(fmt::format("missing `{}.{}`", prefix, field));
    return it->second;
  };
  const auto check_fields = [](const std::map<std::string, std::string>& fields,
                               const std::string& prefix,
                               std::initializer_list<std::string_view> allowed) {
    for (const auto& [field, value] : fields) {
      if (std::find(allowed.begin(), allowed.end(), field) == allowed.end()) {
        throw ConfigError(fmt::format("unknown key `{}.{}`", prefix, field));
      }
    }
  };

  for (const auto& name : vowel_order) {
    const auto& fields = vowels[name];
    const auto prefix = "vowel." + name;
    check_fields(fields, prefix, {"formants", "bandwidths", "duration", "f0"});
    VowelSpec v;
    v.name = name;
    const auto f = split_list(require(fields, prefix, "formants"));
    const auto b = split_list(require(fields, prefix, "bandwidths"));
    if (f.size() != 4 || b.size() != 4) {
      throw ConfigError(fmt::format("{}: formants and bandwidths need four values", prefix));
    }
    for (std::size_t i = 0; i < 4; ++i) {
      v.formants[i] = parse_double(f[i]);
      v.bandwidths[i] = parse_double(b[i]);
    }
    v.duration = parse_range(require(fields, prefix, "duration"), prefix + ".duration");
    v.f0 = parse_range(require(fields, prefix, "f0"), prefix + ".f0");
    v.validate();
    spec.vowels.push_back(std::move(v));
  }
  for (const auto& name : consonant_order) {
    const auto& fields = consonants[name];
    const auto prefix = "consonant." + name;
    check_fields(fields, prefix, {"band", "burst", "duration"});
    ConsonantSpec c;
    c.name = name;
    c.noise_band = parse_range(require(fields, prefix, "band"), prefix + ".band");
    c.burst = parse_bool(require(fields, prefix, "burst"));
    c.duration = parse_range(require(fields, prefix, "duration"), prefix + ".duration");
    spec.consonants.push_back(std::move(c));
  }
  return spec;
}

std::string format_synth_spec(const SynthSpec& spec) {
  std::string out = "# Synthetic corpus tables (Hz, seconds).\n";
  out += fmt::format("formant_jitter = {}\n", format_double(spec.formant_jitter));
  const auto list = [](const auto& values) {
    std::vector<std::string> parts;
    for (const double v : values) parts.push_back(format_double(v));
    return join(parts, ", ");
  };
  for (const auto& v : spec.vowels) {
    out += fmt::format("\nvowel.{}.formants = {}\n", v.name, list(v.formants));
    out += fmt::format("vowel.{}.bandwidths = {}\n", v.name, list(v.bandwidths));
    out += fmt::format("vowel.{}.duration = {}\n", v.name,
                       list(std::array{v.duration.lo, v.duration.hi}));
    out += fmt::format("vowel.{}.f0 = {}\n", v.name, list(std::array{v.f0.lo, v.f0.hi}));
  }
  for (const auto& c : spec.consonants) {
    out += fmt::format("\nconsonant.{}.band = {}\n", c.name,
                       list(std::array{c.noise_band.lo, c.noise_band.hi}));
    out += fmt::format("consonant.{}.burst = {}\n", c.name, c.burst ? "true" : "false");
    out += fmt::format("consonant.{}.duration = {}\n", c.name,
                       list(std::array{c.duration.lo, c.duration.hi}));
  }
  return out;
}

AudioClip synth_vowel(const VowelSpec& spec, double f0, double duration, int sample_rate,
                      std::uint64_t seed) {
  spec.validate();
  if (sample_rate <= 0) throw InvalidInput("sample rate must be positive");
  if (!spec.f0.contains(f0)) {
    throw InvalidInput(fmt::format("f0 {} outside [{}, {}]", f0, spec.f0.lo, spec.f0.hi));
  }
  if (!spec.duration.contains(duration)) {
    throw InvalidInput(fmt::format("duration {} outside [{}, {}]", duration, spec.duration.lo,
                                   spec.duration.hi));
  }
  if (!(f0 < spec.formants[0])) throw InvalidInput("f0 must lie below F1");
  if (!(spec.formants[3] < sample_rate / 2.0)) throw InvalidInput("F4 must lie below Nyquist");

  std::mt19937_64 rng(seed);
  const std::size_t n = sample_count(duration, sample_rate);
  const double period = sample_rate / f0;

  std::vector<double> signal(n, 0.0);
  for (double t = uniform(rng, 0.0, period); t < static_cast<double>(n);) {
    const auto idx = static_cast<std::size_t>(std::llround(t));
    if (idx < n) signal[idx] += 1.0;
    t += period * (1.0 + uniform(rng, -kPeriodJitter, kPeriodJitter));
  }
  for (std::size_t k = 0; k < 4; ++k) {
    Resonator res(spec.formants[k], spec.bandwidths[k], sample_rate);
    for (double& v : signal) v = res(v);
  }
  const double ramp = kVowelFade * sample_rate;
  for (std::size_t i = 0; i < n; ++i) {
    signal[i] *= raised_cosine(static_cast<double>(i), ramp) *
                 raised_cosine(static_cast<double>(n - 1 - i), ramp);
  }
  peak_normalize(signal);

  AudioClip clip;
  clip.samples = std::move(signal);
  clip.sample_rate = sample_rate;
  clip.label = spec.name;
  return clip;
}

AudioClip synth_unvoiced(const ConsonantSpec& spec, double duration, int sample_rate,
                         std::uint64_t seed) {
  if (sample_rate <= 0) throw InvalidInput("sample rate must be positive");
  spec.validate(sample_rate / 2.0);
  if (!(duration > 0.0)) throw InvalidInput("duration must be positive");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const std::size_t n = sample_count(duration, sample_rate);
  std::size_t fft_len = 1;
  while (fft_len < n) fft_len <<= 1;

  std::vector<double> noise(fft_len);
  for (double& v : noise) v = gauss(rng);

  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> spectrum;
  fft.fwd(spectrum, noise);
  const double floor_gain = std::pow(10.0, kNoiseFloorDb / 20.0);
  const double lo = spec.noise_band.lo;
  const double hi = spec.noise_band.hi;
  for (std::size_t k = 0; k < fft_len; ++k) {
    const std::size_t mirrored = std::min(k, fft_len - k);
    const double f = static_cast<double>(mirrored) * sample_rate / fft_len;
    double gain = floor_gain;
    if (f >= lo && f <= hi) {
      gain = 1.0;
    } else {
      const double dist = f < lo ? lo - f : f - hi;
      if (dist < kNoiseTransitionHz) {
        const double w = 0.5 + 0.5 * std::cos(std::numbers::pi * dist / kNoiseTransitionHz);
        gain = floor_gain + (1.0 - floor_gain) * w;
      }
    }
    if (k == 0) gain = 0.0;
    spectrum[k] *= gain;
  }
  std::vector<double> shaped;
  fft.inv(shaped, spectrum);
  shaped.resize(n);

  const double attack = (spec.burst ? 0.002 : 0.015) * sample_rate;
  const double release = 0.02 * sample_rate;
  for (std::size_t i = 0; i < n; ++i) {
    double env = raised_cosine(static_cast<double>(i), attack) *
                 raised_cosine(static_cast<double>(n - 1 - i), release);
    if (spec.burst) {
      const double t = static_cast<double>(i) / sample_rate;
      env *= 0.3 + 0.7 * std::exp(-t / kBurstDecay);
    }
    shaped[i] *= env;
  }
  peak_normalize(shaped);

  AudioClip clip;
  clip.samples = std::move(shaped);
  clip.sample_rate = sample_rate;
  clip.label = spec.name;
  return clip;
}

AudioClip sample_vowel(const VowelSpec& spec, double formant_jitter, int sample_rate,
                       std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const double f0 = uniform(rng, spec.f0.lo, spec.f0.hi);
  const double duration = uniform(rng, spec.duration.lo, spec.duration.hi);
  VowelSpec jittered = spec;
  for (double& f : jittered.formants) {
    f *= 1.0 + uniform(rng, -formant_jitter, formant_jitter);
  }
  return synth_vowel(jittered, f0, duration, sample_rate, derive_seed(seed, 1));
}

AudioClip sample_unvoiced(const ConsonantSpec& spec, int sample_rate, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const double duration = uniform(rng, spec.duration.lo, spec.duration.hi);
  return synth_unvoiced(spec, duration, sample_rate, derive_seed(seed, 1));
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  // splitmix64 finalizer over the pair.
  auto mix = [](std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  };
  return mix(base ^ mix(index));
}

}  // namespace spectrocam
