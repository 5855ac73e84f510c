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

#include "run_config.hpp"

#include <algorithm>
#include <filesystem>
#include <functional>

#include <fmt/format.h>

#include "spectrocam/corpus.hpp"
#include "spectrocam/error.hpp"
#include "spectrocam/keyvalue.hpp"

namespace spectrocam::cli {
namespace {

const std::vector<std::string> kVowelLabels{"i", "u", "ae", "er", "aa"};
const std::vector<std::string> kVoicingLabels{"voiced", "unvoiced"};

struct Field {
  ConfigKey doc;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

std::vector<int> parse_int_list(const std::string& v) {
  std::vector<int> out;
  for (const auto& item : split_list(v)) out.push_back(static_cast<int>(parse_int(item)));
  return out;
}

std::string int_list(const std::vector<int>& v) {
  std::vector<std::string> items;
  for (int x : v) items.push_back(std::to_string(x));
  return join(items, ",");
}

std::string bands_string(const std::vector<Band>& bands) {
  std::vector<std::string> items;
  for (const auto& b : bands) {
    items.push_back(format_double(b.low) + "-" + format_double(b.high));
  }
  return join(items, ",");
}

Experiment parse_experiment(const std::string& v) {
  if (v == "vowel_fullband") return Experiment::kVowelFullband;
  if (v == "vowel_4k") return Experiment::kVowel4k;
  if (v == "voiced_unvoiced") return Experiment::kVoicedUnvoiced;
  if (v == "custom") return Experiment::kCustom;
  throw InvalidInput(
      fmt::format("`{}` is not one of vowel_fullband, vowel_4k, voiced_unvoiced, custom", v));
}

CorpusSource parse_corpus(const std::string& v) {
  if (v == "synthetic") return CorpusSource::kSynthetic;
  if (v == "manifest") return CorpusSource::kManifest;
  throw InvalidInput(fmt::format("`{}` is not one of synthetic, manifest", v));
}

template <typename T>
T positive(T v) {
  if (!(v > T{0})) throw InvalidInput("must be positive");
  return v;
}

std::size_t to_size(const std::string& v) {
  return static_cast<std::size_t>(positive(parse_int(v)));
}

const std::vector<Field>& fields() {
  static const std::vector<Field> kFields{
      {{"experiment",
        "vowel_fullband | vowel_4k | voiced_unvoiced | custom (default vowel_fullband). Presets "
        "pin labels and f_max"},
       [](RunConfig& c, const std::string& v) { c.experiment = parse_experiment(v); },
       [](const RunConfig& c) { return std::string(experiment_name(c.experiment)); }},
      {{"seed", "base seed for synthesis, split, initialization and shuffling (default 7)"},
       [](RunConfig& c, const std::string& v) { c.seed = parse_uint64(v); },
       [](const RunConfig& c) { return std::to_string(c.seed); }},
      {{"out_dir", "output directory (default spectrocam_out)"},
       [](RunConfig& c, const std::string& v) { c.out_dir = v; },
       [](const RunConfig& c) { return c.out_dir; }},
      {{"corpus", "synthetic | manifest (default synthetic)"},
       [](RunConfig& c, const std::string& v) { c.corpus = parse_corpus(v); },
       [](const RunConfig& c) {
         return std::string(c.corpus == CorpusSource::kSynthetic ? "synthetic" : "manifest");
       }},
      {{"synth_spec", "synthesizer table file; empty uses the built-in tables"},
       [](RunConfig& c, const std::string& v) { c.synth_spec = v; },
       [](const RunConfig& c) { return c.synth_spec; }},
      {{"manifest",
        "dataset manifest; WAV paths are relative to its directory (default "
        "<out_dir>/corpus/manifest.csv)"},
       [](RunConfig& c, const std::string& v) { c.manifest = v; },
       [](const RunConfig& c) { return c.manifest; }},
      {{"clips_per_class", "synthetic clips per class (default 1000)"},
       [](RunConfig& c, const std::string& v) {
         c.clips_per_class = static_cast<int>(positive(parse_int(v)));
       },
       [](const RunConfig& c) { return std::to_string(c.clips_per_class); }},
      {{"train_fraction", "share of each class placed in the train split (default 0.7)"},
       [](RunConfig& c, const std::string& v) {
         const double f = parse_double(v);
         if (!(f > 0.0 && f < 1.0)) throw InvalidInput("must lie in (0, 1)");
         c.train_fraction = f;
       },
       [](const RunConfig& c) { return format_double(c.train_fraction); }},
      {{"sample_rate", "synthesis sample rate in Hz (default 22050)"},
       [](RunConfig& c, const std::string& v) {
         c.sample_rate = static_cast<int>(positive(parse_int(v)));
       },
       [](const RunConfig& c) { return std::to_string(c.sample_rate); }},
      {{"labels",
        "ordered class labels; required for custom, fixed by presets. With a synthetic custom "
        "corpus each label names a vowel or consonant of the synth spec"},
       [](RunConfig& c, const std::string& v) { c.labels = split_list(v); },
       [](const RunConfig& c) { return join(c.labels, ","); }},
      {{"f_max",
        "frequency cap in Hz; required for custom, fixed by presets (Nyquist, 4000, 4000)"},
       [](RunConfig& c, const std::string& v) { c.f_max = positive(parse_double(v)); },
       [](const RunConfig& c) { return format_double(c.f_max); }},
      {{"image_h", "network input height (default 96)"},
       [](RunConfig& c, const std::string& v) { c.image_h = to_size(v); },
       [](const RunConfig& c) { return std::to_string(c.image_h); }},
      {{"image_w", "network input width (default 96)"},
       [](RunConfig& c, const std::string& v) { c.image_w = to_size(v); },
       [](const RunConfig& c) { return std::to_string(c.image_w); }},
      {{"fft_size", "STFT length (default 512)"},
       [](RunConfig& c, const std::string& v) {
         c.stft.fft_size = static_cast<int>(positive(parse_int(v)));
       },
       [](const RunConfig& c) { return std::to_string(c.stft.fft_size); }},
      {{"window_len", "Hann window length, <= fft_size (default 512)"},
       [](RunConfig& c, const std::string& v) {
         c.stft.window_len = static_cast<int>(positive(parse_int(v)));
       },
       [](const RunConfig& c) { return std::to_string(c.stft.window_len); }},
      {{"hop", "STFT hop in samples (default 128)"},
       [](RunConfig& c, const std::string& v) {
         c.stft.hop = static_cast<int>(positive(parse_int(v)));
       },
       [](const RunConfig& c) { return std::to_string(c.stft.hop); }},
      {{"db_floor", "log-magnitude floor in dB (default -80)"},
       [](RunConfig& c, const std::string& v) { c.stft.db_floor = parse_double(v); },
       [](const RunConfig& c) { return format_double(c.stft.db_floor); }},
      {{"batch_size", "minibatch size (default 32)"},
       [](RunConfig& c, const std::string& v) {
         c.train.batch_size = static_cast<int>(positive(parse_int(v)));
       },
       [](const RunConfig& c) { return std::to_string(c.train.batch_size); }},
      {{"learning_rate", "Adam step size (default 0.0001)"},
       [](RunConfig& c, const std::string& v) { c.train.learning_rate = positive(parse_double(v)); },
       [](const RunConfig& c) { return format_double(c.train.learning_rate); }},
      {{"beta1", "Adam first-moment decay (default 0.9)"},
       [](RunConfig& c, const std::string& v) { c.train.beta1 = parse_double(v); },
       [](const RunConfig& c) { return format_double(c.train.beta1); }},
      {{"beta2", "Adam second-moment decay (default 0.999)"},
       [](RunConfig& c, const std::string& v) { c.train.beta2 = parse_double(v); },
       [](const RunConfig& c) { return format_double(c.train.beta2); }},
      {{"eps", "Adam denominator epsilon (default 1e-08)"},
       [](RunConfig& c, const std::string& v) { c.train.eps = positive(parse_double(v)); },
       [](const RunConfig& c) { return format_double(c.train.eps); }},
      {{"epochs", "training epochs (default 30)"},
       [](RunConfig& c, const std::string& v) {
         const auto e = parse_int(v);
         if (e < 0) throw InvalidInput("must be >= 0");
         c.train.epochs = static_cast<int>(e);
       },
       [](const RunConfig& c) { return std::to_string(c.train.epochs); }},
      {{"channels", "channels per residual stage (default 8,16,32)"},
       [](RunConfig& c, const std::string& v) { c.channels = parse_int_list(v); },
       [](const RunConfig& c) { return int_list(c.channels); }},
      {{"blocks", "residual blocks per stage (default 2,2,2)"},
       [](RunConfig& c, const std::string& v) { c.blocks = parse_int_list(v); },
       [](const RunConfig& c) { return int_list(c.blocks); }},
      {{"stem_stride", "stride of the 3x3 stem convolution (default 2)"},
       [](RunConfig& c, const std::string& v) {
         c.stem_stride = static_cast<int>(positive(parse_int(v)));
       },
       [](const RunConfig& c) { return std::to_string(c.stem_stride); }},
      {{"checkpoint", "model file (default <out_dir>/model.sxai)"},
       [](RunConfig& c, const std::string& v) { c.checkpoint = v; },
       [](const RunConfig& c) { return c.checkpoint; }},
      {{"alpha", "heatmap opacity in overlays, in [0, 1] (default 0.45)"},
       [](RunConfig& c, const std::string& v) {
         const double a = parse_double(v);
         if (!(a >= 0.0 && a <= 1.0)) throw InvalidInput("must lie in [0, 1]");
         c.alpha = a;
       },
       [](const RunConfig& c) { return format_double(c.alpha); }},
      {{"bands",
        "profile bands as low-high pairs, e.g. 0-700,700-1500 (default "
        "0-700,700-1500,1500-2500,2500-4000,4000-f_max, truncated at f_max)"},
       [](RunConfig& c, const std::string& v) { c.bands = v.empty() ? std::vector<Band>{} : parse_bands(v); },
       [](const RunConfig& c) { return bands_string(c.bands); }},
      {{"explain_per_class", "test clips per class rendered by explain (default 3)"},
       [](RunConfig& c, const std::string& v) {
         const auto n = parse_int(v);
         if (n < 0) throw InvalidInput("must be >= 0");
         c.explain_per_class = static_cast<int>(n);
       },
       [](const RunConfig& c) { return std::to_string(c.explain_per_class); }},
      {{"png_scale", "integer enlargement of overlay PNGs (default 2)"},
       [](RunConfig& c, const std::string& v) {
         c.png_scale = static_cast<int>(positive(parse_int(v)));
       },
       [](const RunConfig& c) { return std::to_string(c.png_scale); }},
      {{"clip", "explain this WAV instead of test-split clips"},
       [](RunConfig& c, const std::string& v) { c.clip = v; },
       [](const RunConfig& c) { return c.clip; }},
  };
  return kFields;
}

void apply_preset(RunConfig& cfg, const std::map<std::string, std::string>& given) {
  std::vector<std::string> labels;
  double f_max = 0.0;
  switch (cfg.experiment) {
    case Experiment::kVowelFullband:
      labels = kVowelLabels;
      f_max = cfg.sample_rate / 2.0;
      break;
    case Experiment::kVowel4k:
      labels = kVowelLabels;
      f_max = 4000.0;
      break;
    case Experiment::kVoicedUnvoiced:
      labels = kVoicingLabels;
      f_max = 4000.0;
      break;
    case Experiment::kCustom:
      for (const char* key : {"labels", "f_max"}) {
        if (!given.count(key)) throw ConfigError(fmt::format("experiment custom requires `{}`", key));
      }
      if (cfg.labels.empty()) throw ConfigError("`labels` must name at least one class");
      return;
  }
  const auto name = experiment_name(cfg.experiment);
  if (given.count("labels") && cfg.labels != labels) {
    throw ConfigError(fmt::format("experiment {} fixes labels = {}; got {}", name,
                                  join(labels, ","), join(cfg.labels, ",")));
  }
  if (given.count("f_max") && cfg.f_max != f_max) {
    throw ConfigError(fmt::format("experiment {} fixes f_max = {}; got {}", name,
                                  format_double(f_max), format_double(cfg.f_max)));
  }
  cfg.labels = labels;
  cfg.f_max = f_max;
}

}  // namespace

std::string_view experiment_name(Experiment e) {
  switch (e) {
    case Experiment::kVowelFullband: return "vowel_fullband";
    case Experiment::kVowel4k: return "vowel_4k";
    case Experiment::kVoicedUnvoiced: return "voiced_unvoiced";
    case Experiment::kCustom: return "custom";
  }
  return "custom";
}

std::string RunConfig::manifest_path() const {
  if (!manifest.empty()) return manifest;
  return (std::filesystem::path(out_dir) / "corpus" / "manifest.csv").string();
}

std::string RunConfig::checkpoint_path() const {
  if (!checkpoint.empty()) return checkpoint;
  return (std::filesystem::path(out_dir) / "model.sxai").string();
}

SpectroPipeline RunConfig::pipeline() const {
  SpectroPipeline p;
  p.stft = stft;
  p.f_max = f_max;
  p.image_h = image_h;
  p.image_w = image_w;
  return p;
}

NetworkConfig RunConfig::network_config() const {
  NetworkConfig n;
  n.input_h = image_h;
  n.input_w = image_w;
  n.channels_per_stage = channels;
  n.blocks_per_stage = blocks;
  n.stem_stride = stem_stride;
  n.n_classes = static_cast<int>(labels.size());
  n.seed = derive_seed(seed, 1);
  return n;
}

TrainConfig RunConfig::train_config() const {
  TrainConfig t = train;
  t.seed = derive_seed(seed, 2);
  return t;
}

std::vector<Band> RunConfig::profile_bands() const {
  return bands.empty() ? default_bands(f_max) : bands;
}

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> kKeys = [] {
    std::vector<ConfigKey> keys;
    for (const auto& f : fields()) keys.push_back(f.doc);
    return keys;
  }();
  return kKeys;
}

RunConfig make_run_config(const std::map<std::string, std::string>& values) {
  RunConfig cfg;
  for (const auto& [key, value] : values) {
    const auto& all = fields();
    const auto it = std::find_if(all.begin(), all.end(),
                                 [&](const Field& f) { return f.doc.name == key; });
    if (it == all.end()) throw ConfigError(fmt::format("unknown config key `{}`", key));
    try {
      it->set(cfg, value);
    } catch (const InvalidInput& e) {
      throw ConfigError(fmt::format("bad value for `{}`: {}", key, e.what()));
    }
  }
  apply_preset(cfg, values);
  try {
    cfg.stft.validate();
    cfg.train.validate();
    cfg.network_config().validate();
    if (cfg.f_max > cfg.sample_rate / 2.0 && cfg.corpus == CorpusSource::kSynthetic) {
      throw InvalidInput(fmt::format("f_max {} exceeds the Nyquist frequency {}",
                                     format_double(cfg.f_max), cfg.sample_rate / 2.0));
    }
  } catch (const InvalidInput& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

RunConfig load_run_config(const std::string& path, const Overrides& overrides) {
  std::map<std::string, std::string> values;
  if (!path.empty()) {
    const std::string text = read_text_file(path);
    try {
      for (const auto& kv : parse_key_values(text)) values[kv.key] = kv.value;
    } catch (const ParseError& e) {
      throw ConfigError(fmt::format("{}: {}", path, e.what()));
    }
  }
  for (const auto& [key, value] : overrides) values[key] = value;
  return make_run_config(values);
}

std::string format_run_config(const RunConfig& cfg) {
  std::string out;
  for (const auto& f : fields()) {
    const std::string v = f.get(cfg);
    if (v.empty()) continue;
    out += fmt::format("{} = {}\n", f.doc.name, v);
  }
  return out;
}

}  // namespace spectrocam::cli
