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

#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <set>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "spectrocam/cam.hpp"
#include "spectrocam/checkpoint.hpp"
#include "spectrocam/corpus.hpp"
#include "spectrocam/error.hpp"
#include "spectrocam/keyvalue.hpp"

namespace spectrocam::cli {
namespace fs = std::filesystem;
namespace {

void make_dirs(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError(fmt::format("cannot create directory {}: {}", dir.string(), ec.message()));
}

fs::path manifest_dir(const std::string& manifest_path) {
  const fs::path parent = fs::path(manifest_path).parent_path();
  return parent.empty() ? fs::path(".") : parent;
}

SynthSpec load_synth_spec(const RunConfig& cfg) {
  if (cfg.synth_spec.empty()) return default_synth_spec();
  return parse_synth_spec(read_text_file(cfg.synth_spec));
}

bool has_vowel(const SynthSpec& spec, const std::string& name) {
  return std::any_of(spec.vowels.begin(), spec.vowels.end(),
                     [&](const VowelSpec& v) { return v.name == name; });
}

bool has_consonant(const SynthSpec& spec, const std::string& name) {
  return std::any_of(spec.consonants.begin(), spec.consonants.end(),
                     [&](const ConsonantSpec& c) { return c.name == name; });
}

AudioClip make_clip(const RunConfig& cfg, const SynthSpec& spec, const std::string& label,
                    std::size_t index, std::uint64_t seed) {
  if (cfg.experiment == Experiment::kVoicedUnvoiced) {
    if (label == "voiced") {
      const auto& v = spec.vowels.at(index % spec.vowels.size());
      return sample_vowel(v, spec.formant_jitter, cfg.sample_rate, seed);
    }
    const auto& c = spec.consonants.at(index % spec.consonants.size());
    return sample_unvoiced(c, cfg.sample_rate, seed);
  }
  if (has_vowel(spec, label)) {
    return sample_vowel(spec.vowel(label), spec.formant_jitter, cfg.sample_rate, seed);
  }
  if (has_consonant(spec, label)) {
    return sample_unvoiced(spec.consonant(label), cfg.sample_rate, seed);
  }
  throw ConfigError(fmt::format("label `{}` names no vowel or consonant in the synth spec", label));
}

void check_labels(const std::vector<std::string>& expected, const std::vector<std::string>& got,
                  std::string_view what) {
  if (expected != got) {
    throw ConfigError(fmt::format("{} labels [{}] differ from the configured labels [{}]", what,
                                  join(got, ","), join(expected, ",")));
  }
}

Checkpoint load_matching_checkpoint(const RunConfig& cfg) {
  Checkpoint ckpt = load_checkpoint(cfg.checkpoint_path());
  const auto& nc = ckpt.network.config();
  if (nc.input_h != cfg.image_h || nc.input_w != cfg.image_w) {
    throw ConfigError(fmt::format("checkpoint expects {}x{} images but image_h x image_w is {}x{}",
                                  nc.input_h, nc.input_w, cfg.image_h, cfg.image_w));
  }
  return ckpt;
}

std::string label_counts(const std::map<std::string, std::size_t>& counts) {
  std::vector<std::string> parts;
  for (const auto& [label, n] : counts) parts.push_back(fmt::format("{}={}", label, n));
  return join(parts, " ");
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void write_explained(const fs::path& stem_path, const ClipExplanation& ex,
                     const std::vector<Band>& bands, const RunConfig& cfg,
                     std::vector<std::string>& written) {
  const auto img = scale_nearest(overlay(ex.spectrogram, ex.cam.upsampled, cfg.alpha),
                                 static_cast<std::size_t>(cfg.png_scale));
  const std::string png = stem_path.string() + ".png";
  const std::string csv = stem_path.string() + ".csv";
  write_png(png, img);
  const auto profile = frequency_profile(ex.cam.upsampled, ex.spectrogram.bin_hz(), bands);
  write_text_file(csv, format_profile_csv(profile));
  written.push_back(png);
  written.push_back(csv);
}

}  // namespace

SynthResult cmd_synth(const RunConfig& cfg, std::ostream& log) {
  if (cfg.corpus != CorpusSource::kSynthetic) {
    throw ConfigError("synth needs corpus = synthetic");
  }
  const SynthSpec spec = load_synth_spec(cfg);
  for (const auto& c : spec.consonants) c.validate(cfg.sample_rate / 2.0);

  SynthResult result;
  result.manifest_path = cfg.manifest_path();
  const fs::path root = manifest_dir(result.manifest_path);
  const std::uint64_t base = derive_seed(cfg.seed, 3);
  std::vector<LabeledPath> items;
  for (std::size_t k = 0; k < cfg.labels.size(); ++k) {
    const std::string& label = cfg.labels[k];
    make_dirs(root / label);
    const std::uint64_t class_seed = derive_seed(base, k);
    for (std::size_t i = 0; i < static_cast<std::size_t>(cfg.clips_per_class); ++i) {
      AudioClip clip = make_clip(cfg, spec, label, i, derive_seed(class_seed, i));
      const std::string rel = fmt::format("{}/{}_{:04d}.wav", label, label, i);
      write_wav((root / rel).string(), clip);
      items.push_back({rel, label});
    }
    result.counts[label] = static_cast<std::size_t>(cfg.clips_per_class);
  }
  write_manifest(result.manifest_path,
                 build_manifest(items, cfg.labels, cfg.train_fraction, cfg.seed));
  fmt::print(log, "synth: {} clips ({}) -> {}\n", items.size(), label_counts(result.counts),
             result.manifest_path);
  return result;
}

ExtractResult cmd_extract(const ExtractOptions& opts, std::ostream& log) {
  ExtractResult result;
  auto warn = [&](std::string msg) {
    fmt::print(log, "warning: {}\n", msg);
    result.warnings.push_back(std::move(msg));
  };
  auto list = [](const std::string& dir, const std::string& ext) {
    std::map<std::string, fs::path> out;
    std::error_code ec;
    fs::directory_iterator it(dir, ec);
    if (ec) throw IoError(fmt::format("cannot read directory {}: {}", dir, ec.message()));
    for (const auto& entry : it) {
      if (entry.is_regular_file() && entry.path().extension() == ext) {
        out[entry.path().stem().string()] = entry.path();
      }
    }
    return out;
  };
  const auto wavs = list(opts.wav_dir, ".wav");
  const auto csvs = list(opts.alignment_dir, ".csv");

  std::vector<std::string> unpaired;
  for (const auto& [stem, path] : wavs) {
    if (!csvs.count(stem)) unpaired.push_back(path.string());
  }
  for (const auto& [stem, path] : csvs) {
    if (!wavs.count(stem)) unpaired.push_back(path.string());
  }
  for (const auto& path : unpaired) warn(fmt::format("unpaired file {}", path));
  if (opts.strict && !unpaired.empty()) {
    throw InvalidInput(fmt::format("{} unpaired file(s), first: {}", unpaired.size(),
                                   unpaired.front()));
  }
  if (opts.keep.empty()) warn("keep list is empty; nothing to extract");

  const std::set<std::string> keep(opts.keep.begin(), opts.keep.end());
  std::vector<LabeledPath> items;
  for (const auto& [stem, wav_path] : wavs) {
    const auto csv = csvs.find(stem);
    if (csv == csvs.end() || keep.empty()) continue;
    std::vector<AudioClip> pieces;
    try {
      const auto annotations = parse_alignment(read_text_file(csv->second.string()));
      AudioClip clip = read_wav(wav_path.string());
      clip.source_id = stem;
      pieces = extract_segments(clip, annotations, keep);
    } catch (const ParseError& e) {
      if (opts.strict) {
        throw ParseError(e.line(), fmt::format("{} (in {})", e.detail(), csv->second.string()));
      }
      warn(fmt::format("skipping {}: {}", csv->second.string(), e.what()));
      continue;
    } catch (const RangeError& e) {
      if (opts.strict) throw RangeError(fmt::format("{}: {}", csv->second.string(), e.what()));
      warn(fmt::format("skipping {}: {}", csv->second.string(), e.what()));
      continue;
    }
    for (std::size_t j = 0; j < pieces.size(); ++j) {
      const std::string& label = pieces[j].label;
      make_dirs(fs::path(opts.out_dir) / label);
      const std::string rel = fmt::format("{}/{}_{:03d}.wav", label, stem, j);
      write_wav((fs::path(opts.out_dir) / rel).string(), pieces[j]);
      items.push_back({rel, label});
      ++result.counts[label];
    }
  }
  for (const auto& label : opts.keep) {
    fmt::print(log, "{}: {}\n", label, result.counts.count(label) ? result.counts[label] : 0);
  }
  if (items.empty()) {
    warn("no clips extracted; manifest not written");
    return result;
  }
  std::vector<std::string> label_set;
  for (const auto& label : opts.keep) {
    if (result.counts.count(label) &&
        std::find(label_set.begin(), label_set.end(), label) == label_set.end()) {
      label_set.push_back(label);
    }
  }
  result.manifest_path = (fs::path(opts.out_dir) / "manifest.csv").string();
  write_manifest(result.manifest_path,
                 build_manifest(items, label_set, opts.train_fraction, opts.seed));
  fmt::print(log, "extract: {} clips -> {}\n", items.size(), result.manifest_path);
  return result;
}

TrainResult cmd_train(const RunConfig& cfg, std::ostream& log) {
  const std::string manifest_path = cfg.manifest_path();
  const DatasetManifest manifest = read_manifest(manifest_path);
  check_labels(cfg.labels, manifest.label_set, "manifest");
  const auto loaded =
      load_split(manifest, Split::kTrain, manifest_dir(manifest_path), cfg.pipeline());
  if (loaded.data.size() == 0) throw ConfigError("the train split is empty");

  Network<float> net(cfg.network_config());
  const TrainConfig tcfg = cfg.train_config();
  const auto t0 = std::chrono::steady_clock::now();
  TrainResult result;
  result.history = train(net, loaded.data, tcfg, [&](const EpochStats& s) {
    fmt::print(log, "epoch {:3d}  loss {:.5f}  accuracy {:.4f}  ({:.1f} s)\n", s.epoch,
               s.train_loss, s.train_accuracy, seconds_since(t0));
    log.flush();
  });

  make_dirs(cfg.out_dir);
  Checkpoint ckpt{std::move(net), cfg.labels,
                  TrainingMeta{tcfg.epochs,
                               result.history.empty() ? 0.0 : result.history.back().train_loss,
                               tcfg.seed}};
  result.checkpoint_path = cfg.checkpoint_path();
  save_checkpoint(result.checkpoint_path, ckpt);
  write_text_file((fs::path(cfg.out_dir) / "history.csv").string(),
                  format_history_csv(result.history));
  fmt::print(log, "train: {} examples, {} epochs -> {}\n", loaded.data.size(), tcfg.epochs,
             result.checkpoint_path);
  return result;
}

EvalResult cmd_eval(const RunConfig& cfg, std::ostream& log) {
  const auto t0 = std::chrono::steady_clock::now();
  const Checkpoint ckpt = load_matching_checkpoint(cfg);
  const std::string manifest_path = cfg.manifest_path();
  const DatasetManifest manifest = read_manifest(manifest_path);

  EvalResult result;
  result.confusion = evaluate(ckpt, manifest, manifest_dir(manifest_path), cfg.pipeline());
  result.report = summarize(result.confusion);
  result.report.runtime_seconds = seconds_since(t0);

  const fs::path out(cfg.out_dir);
  make_dirs(out);
  write_text_file((out / "confusion.csv").string(), format_confusion_csv(result.confusion));
  write_text_file((out / "eval_report.txt").string(), format_report(result.report));
  write_text_file((out / "asymmetry.csv").string(), format_asymmetry_csv(result.report));
  write_text_file((out / "eval_runtime.txt").string(),
                  fmt::format("runtime_seconds = {:.3f}\n", result.report.runtime_seconds));
  fmt::print(log, "accuracy = {}\n", format_double(result.report.overall_accuracy));
  fmt::print(log, "runtime_seconds = {:.3f}\n", result.report.runtime_seconds);
  return result;
}

ExplainResult cmd_explain(const RunConfig& cfg, std::ostream& log) {
  const Checkpoint ckpt = load_matching_checkpoint(cfg);
  const SpectroPipeline pipe = cfg.pipeline();
  const auto bands = cfg.profile_bands();
  const fs::path out = fs::path(cfg.out_dir) / "explain";
  make_dirs(out);
  ExplainResult result;

  if (!cfg.clip.empty()) {
    const AudioClip clip = read_wav(cfg.clip);
    const auto ex = explain_clip(ckpt.network, pipe, clip);
    const std::string stem = fs::path(cfg.clip).stem().string();
    write_explained(out / fmt::format("{}_as_{}", stem, ckpt.label_set.at(
                                                            static_cast<std::size_t>(ex.predicted))),
                    ex, bands, cfg, result.written);
    fmt::print(log, "explain: {} predicted {}\n", cfg.clip,
               ckpt.label_set.at(static_cast<std::size_t>(ex.predicted)));
    return result;
  }

  const std::string manifest_path = cfg.manifest_path();
  const DatasetManifest manifest = read_manifest(manifest_path);
  if (ckpt.label_set != manifest.label_set) {
    throw ConfigError(fmt::format("checkpoint labels [{}] differ from manifest labels [{}]",
                                  join(ckpt.label_set, ","), join(manifest.label_set, ",")));
  }
  const fs::path base = manifest_dir(manifest_path);
  const auto loaded = load_split(manifest, Split::kTest, base, pipe);
  if (loaded.entries.empty()) throw ConfigError("the test split is empty");

  std::map<std::string, int> rendered;
  int sample_rate = 0;
  for (const auto& entry : loaded.entries) {
    int& n = rendered[entry.label];
    if (sample_rate != 0 && n >= cfg.explain_per_class) continue;
    const AudioClip clip = read_wav((base / entry.path).string());
    if (sample_rate == 0) sample_rate = clip.sample_rate;
    if (n >= cfg.explain_per_class) continue;
    ++n;
    const auto ex = explain_clip(ckpt.network, pipe, clip);
    make_dirs(out / entry.label);
    const std::string stem = fs::path(entry.path).stem().string();
    write_explained(out / entry.label /
                        fmt::format("{}_as_{}", stem,
                                    ckpt.label_set.at(static_cast<std::size_t>(ex.predicted))),
                    ex, bands, cfg, result.written);
  }

  const int k = static_cast<int>(ckpt.label_set.size());
  const auto means = class_mean_cams(ckpt.network, loaded.data.images, loaded.data.labels, k);
  const double hz_per_row = image_hz_per_row(pipe, sample_rate);
  for (const auto& m : means) {
    const std::string& label = ckpt.label_set[static_cast<std::size_t>(m.class_id)];
    ClassProfile cp{label, m.count, frequency_profile(m.mean, hz_per_row, bands)};
    const std::string stem = (out / fmt::format("class_mean_{}", label)).string();
    write_text_file(stem + ".csv", format_profile_csv(cp.profile));
    write_png(stem + ".png", scale_nearest(render_heatmap(m.mean),
                                           static_cast<std::size_t>(cfg.png_scale)));
    result.written.push_back(stem + ".csv");
    result.written.push_back(stem + ".png");
    fmt::print(log, "class {} ({} clips): peak band {}-{} Hz\n", label, m.count,
               format_double(cp.profile.peak_band.low), format_double(cp.profile.peak_band.high));
    result.class_profiles.push_back(std::move(cp));
  }
  return result;
}

RunResult cmd_run(const RunConfig& cfg, std::ostream& log) {
  make_dirs(cfg.out_dir);
  write_text_file((fs::path(cfg.out_dir) / "config.txt").string(), format_run_config(cfg));
  if (cfg.corpus == CorpusSource::kSynthetic) cmd_synth(cfg, log);
  RunResult result;
  result.train = cmd_train(cfg, log);
  result.eval = cmd_eval(cfg, log);
  result.explain = cmd_explain(cfg, log);
  return result;
}

}  // namespace spectrocam::cli
