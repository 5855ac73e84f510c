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

// Acceptance checks for the full pipeline. Prints one PASS/FAIL line per
// criterion and exits non-zero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/core.h>

#include "commands.hpp"
#include "gradcheck.hpp"
#include "oracles.hpp"
#include "run_config.hpp"
#include "spectrocam/cam.hpp"
#include "spectrocam/corpus.hpp"
#include "spectrocam/keyvalue.hpp"
#include "spectrocam/layers.hpp"
#include "spectrocam/signal.hpp"

namespace {

using namespace spectrocam;
using namespace spectrocam::cli;
namespace fs = std::filesystem;

// Tolerances and budgets.
constexpr double kVowelMinAccuracy = 0.95;
constexpr double kVoicingMinAccuracy = 0.98;
constexpr double kTrainRunBudgetSeconds = 20 * 60;
constexpr int kCamSeeds = 5;
constexpr int kCamMinSeeds = 4;
constexpr int kCamMinVowels = 4;
constexpr double kFormantBandMargin = 100.0;  // Hz
constexpr int kGapDraws = 1000;
constexpr double kGapTolerance = 1e-5;
constexpr int kGradSeeds = 20;
constexpr double kGradBudgetSeconds = 120;
constexpr int kStftSignals = 50;
constexpr double kStftRelTolerance = 1e-9;
constexpr double kStftBudgetSeconds = 30;
constexpr int kSynthSeeds = 20;
constexpr double kFormantTolerance = 50.0;  // Hz
constexpr int kDeterminismClipsPerClass = 300;
constexpr int kDeterminismEpochs = 4;
constexpr double kCapHz = 4000.0;

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void progress(const std::string& msg) { std::cerr << msg << std::endl; }

RunResult run_logged(const RunConfig& cfg) {
  fs::create_directories(cfg.out_dir);
  std::ofstream log(fs::path(cfg.out_dir) / "run.log");
  return cmd_run(cfg, log);
}

// ---------------------------------------------------------------------------
// 1, 2: full-scale synthetic runs

Outcome full_run(const fs::path& work, const std::string& experiment, double min_accuracy) {
  const auto cfg = make_run_config({{"experiment", experiment}, {"out_dir", work.string()}, {"seed", "7"}});
  progress(fmt::format("  {}: {} clips per class, {} epochs", experiment, cfg.clips_per_class, cfg.train.epochs));
  const auto t0 = Clock::now();
  const auto r = run_logged(cfg);
  const double secs = seconds_since(t0);
  const double acc = r.eval.report.overall_accuracy;
  return {acc >= min_accuracy && secs <= kTrainRunBudgetSeconds,
          fmt::format("test accuracy {:.4f} (need >= {}), runtime {:.1f} s (need <= {:.0f} s)", acc,
                      min_accuracy, secs, kTrainRunBudgetSeconds)};
}

// ---------------------------------------------------------------------------
// 3: class-mean CAM peaks against formants

bool near_band(const Band& b, double hz) {
  return hz >= b.low - kFormantBandMargin && hz <= b.high + kFormantBandMargin;
}

Outcome cam_formants(const fs::path& work) {
  const auto spec = default_synth_spec();
  int ae_seeds = 0;
  int vowel_seeds = 0;
  std::vector<std::string> per_seed;
  for (int s = 0; s < kCamSeeds; ++s) {
    const std::string seed = std::to_string(7 + s);
    const auto cfg = make_run_config(
        {{"experiment", "vowel_4k"}, {"out_dir", (work / ("seed" + seed)).string()}, {"seed", seed}});
    progress(fmt::format("  vowel_4k seed {}", seed));
    const auto r = run_logged(cfg);
    int vowels_ok = 0;
    std::string peaks;
    for (const auto& cp : r.explain.class_profiles) {
      const auto& peak = cp.profile.peak_band;
      const auto& v = spec.vowel(cp.label);
      if (near_band(peak, v.formants[0]) || near_band(peak, v.formants[1])) ++vowels_ok;
      if (cp.label == "ae" && (peak == Band{0, 700} || peak == Band{700, 1500})) ++ae_seeds;
      peaks += fmt::format(" {}:{}-{}", cp.label, peak.low, peak.high);
    }
    if (vowels_ok >= kCamMinVowels) ++vowel_seeds;
    per_seed.push_back(fmt::format("seed {} acc {:.3f} vowels {}/5 [{} ]", seed,
                                   r.eval.report.overall_accuracy, vowels_ok, peaks));
  }
  for (const auto& line : per_seed) progress("    " + line);
  return {ae_seeds >= kCamMinSeeds && vowel_seeds == kCamSeeds,
          fmt::format("/ae/ peak in 0-700 or 700-1500 Hz for {}/{} seeds (need >= {}); "
                      ">= {}/5 vowels peak within {} Hz of F1 or F2 for {}/{} seeds (need all)",
                      ae_seeds, kCamSeeds, kCamMinSeeds, kCamMinVowels, kFormantBandMargin,
                      vowel_seeds, kCamSeeds)};
}

// ---------------------------------------------------------------------------
// 4: GAP identity

Outcome gap_identity(const fs::path&) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> bias(0.0, 0.5);
  std::normal_distribution<double> db(-40.0, 15.0);
  std::uniform_int_distribution<int> ch(2, 12), side(8, 40);
  const NetworkConfig base = make_run_config({}).network_config();
  double worst = 0.0;
  std::size_t maps = 0;
  for (int draw = 0; draw < kGapDraws; ++draw) {
    NetworkConfig cfg = base;
    if (draw % 4 != 0) {
      cfg.input_h = static_cast<std::size_t>(side(rng));
      cfg.input_w = static_cast<std::size_t>(side(rng));
      cfg.channels_per_stage = {ch(rng), ch(rng), ch(rng)};
      cfg.blocks_per_stage = {1, 1, 1};
      cfg.n_classes = 2 + draw % 4;
    }
    cfg.seed = derive_seed(4, static_cast<std::uint64_t>(draw));
    Network<float> net(cfg);
    for (auto& v : net.parameters().back().values()) v = static_cast<float>(bias(rng));
    net.input_norm() = {-40.0, 15.0};
    Tensor<float> x({1, 1, cfg.input_h, cfg.input_w});
    for (auto& v : x.values()) v = static_cast<float>(db(rng));
    const auto out = net.forward(x);
    for (int k = 0; k < cfg.n_classes; ++k) {
      const auto raw = compute_cam(out.features, net.fc_weight(), k);
      double mean = 0.0;
      for (const double v : raw.data()) mean += v;
      mean /= static_cast<double>(raw.size());
      const auto ku = static_cast<std::size_t>(k);
      worst = std::max(worst, std::abs(mean - (static_cast<double>(out.logits[ku]) -
                                               static_cast<double>(net.fc_bias()[ku]))));
      ++maps;
    }
  }
  return {worst < kGapTolerance, fmt::format("max |mean(CAM) - (logit - bias)| = {:.3g} over {} maps "
                                             "from {} draws (need < {})",
                                             worst, maps, kGapDraws, kGapTolerance)};
}

// ---------------------------------------------------------------------------
// 5: gradient oracle

Tensor<double> random_tensor(Shape shape, std::mt19937_64& rng) {
  Tensor<double> t(std::move(shape));
  std::normal_distribution<double> g;
  for (auto& v : t.values()) v = g(rng);
  return t;
}

oracle::GradCheck layer_checks(std::mt19937_64& rng) {
  oracle::GradCheck total;
  struct Geometry {
    std::size_t k;
    int stride, pad;
  };
  for (const Geometry g : {Geometry{3, 1, 1}, Geometry{3, 2, 1}, Geometry{1, 2, 0}}) {
    auto x = random_tensor({2, 3, 7, 6}, rng);
    auto w = random_tensor({4, 3, g.k, g.k}, rng);
    auto b = random_tensor({4}, rng);
    const auto probe = random_tensor(layers::conv2d_forward(x, w, b, g.stride, g.pad).shape(), rng);
    const auto grads = layers::conv2d_backward(x, w, probe, g.stride, g.pad, true);
    const auto loss = [&] { return oracle::dot(layers::conv2d_forward(x, w, b, g.stride, g.pad), probe); };
    const std::string name = fmt::format("conv{}x{}s{}", g.k, g.k, g.stride);
    total.merge(oracle::check_gradient(x, grads.input, loss, name + ".input"));
    total.merge(oracle::check_gradient(w, grads.weight, loss, name + ".weight"));
    total.merge(oracle::check_gradient(b, grads.bias, loss, name + ".bias"));
  }
  {
    auto x = random_tensor({2, 3, 4, 4}, rng);
    for (auto& v : x.values()) {
      if (std::abs(v) < 1e-2) v = 0.5;
    }
    const auto probe = random_tensor(x.shape(), rng);
    total.merge(oracle::check_gradient(x, layers::relu_backward(x, probe),
                                       [&] { return oracle::dot(layers::relu(x), probe); }, "relu"));
  }
  {
    auto x = random_tensor({2, 3, 4, 5}, rng);
    const auto probe = random_tensor({2, 3}, rng);
    total.merge(oracle::check_gradient(x, layers::global_avg_pool_backward(probe, 4, 5),
                                       [&] { return oracle::dot(layers::global_avg_pool(x), probe); }, "gap"));
  }
  {
    auto x = random_tensor({3, 4}, rng);
    auto w = random_tensor({2, 4}, rng);
    auto b = random_tensor({2}, rng);
    const auto probe = random_tensor({3, 2}, rng);
    const auto g = layers::linear_backward(x, w, probe);
    const auto loss = [&] { return oracle::dot(layers::linear_forward(x, w, b), probe); };
    total.merge(oracle::check_gradient(x, g.input, loss, "linear.input"));
    total.merge(oracle::check_gradient(w, g.weight, loss, "linear.weight"));
    total.merge(oracle::check_gradient(b, g.bias, loss, "linear.bias"));
  }
  {
    auto z = random_tensor({4, 3}, rng);
    const std::vector<int> labels{0, 2, 1, 2};
    total.merge(oracle::check_gradient(z, layers::cross_entropy(z, labels).grad,
                                       [&] { return layers::cross_entropy(z, labels).loss; },
                                       "cross_entropy"));
  }
  return total;
}

// Residual adds, projections and the full chain, on an 8x8 two-class net.
// Draws with a pre-activation within 1e-3 of a ReLU kink are re-seeded.
oracle::GradCheck network_check(std::uint64_t seed, int& reseeds) {
  for (std::uint64_t attempt = 0;; ++attempt) {
    NetworkConfig cfg;
    cfg.input_h = 8;
    cfg.input_w = 8;
    cfg.channels_per_stage = {2, 3};
    cfg.blocks_per_stage = {2, 1};
    cfg.n_classes = 2;
    cfg.stem_stride = seed % 2 ? 1 : 2;
    cfg.seed = derive_seed(seed, attempt);
    Network<double> net(cfg);
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> u(-0.2, 0.2);
    for (std::size_t i = 0; i < net.parameters().size(); ++i) {
      if (net.parameter_names()[i].ends_with(".bias")) {
        for (auto& v : net.parameters()[i].values()) v = u(rng);
      }
    }
    Tensor<double> batch({2, 1, 8, 8});
    std::normal_distribution<double> g;
    for (auto& v : batch.values()) v = g(rng);
    if (net.min_abs_preactivation(batch) < 1e-3) {
      ++reseeds;
      continue;
    }
    const std::vector<int> labels{0, 1};
    const auto analytic = net.loss_and_grads(batch, labels);
    oracle::GradCheck total;
    for (std::size_t i = 0; i < net.parameters().size(); ++i) {
      total.merge(oracle::check_gradient(net.parameters()[i], analytic.grads[i],
                                         [&] { return net.loss_and_grads(batch, labels).loss; },
                                         "net." + net.parameter_names()[i]));
    }
    return total;
  }
}

Outcome gradient_oracle(const fs::path&) {
  const auto t0 = Clock::now();
  oracle::GradCheck total;
  int reseeds = 0;
  for (int seed = 0; seed < kGradSeeds; ++seed) {
    std::mt19937_64 rng(static_cast<std::uint64_t>(seed));
    total.merge(layer_checks(rng));
    total.merge(network_check(static_cast<std::uint64_t>(seed), reseeds));
  }
  const double secs = seconds_since(t0);
  return {total.ok() && secs < kGradBudgetSeconds,
          fmt::format("{} derivatives on {} seeds, {} outside tolerance, max absolute error {:.3g} "
                      "(floor {}), max relative error above the floor {:.3g} (need < {}), {} kink re-seeds, runtime {:.1f} s (need < {:.0f} s)",
                      total.checked, kGradSeeds, total.failures, total.max_abs_error, oracle::kGradAbsTol,
                      total.max_rel_error,
                      oracle::kGradRelTol, reseeds, secs, kGradBudgetSeconds)};
}

// ---------------------------------------------------------------------------
// 6: STFT oracle

Outcome stft_oracle(const fs::path&) {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(6);
  std::normal_distribution<double> g;
  std::uniform_int_distribution<std::size_t> length(100, 6000);
  std::uniform_int_distribution<int> pick(0, 2);
  double worst = 0.0;
  for (int trial = 0; trial < kStftSignals; ++trial) {
    AudioClip clip;
    clip.sample_rate = std::array{8000, 16000, 22050}[static_cast<std::size_t>(pick(rng))];
    clip.samples.resize(length(rng));
    for (auto& v : clip.samples) v = std::clamp(0.3 * g(rng), -1.0, 1.0);
    StftParams p;
    p.fft_size = std::array{256, 512, 512}[static_cast<std::size_t>(pick(rng))];
    p.window_len = p.fft_size - 64 * pick(rng);
    p.hop = std::array{64, 128, 100}[static_cast<std::size_t>(pick(rng))];
    const auto x = stft(clip, p);
    const auto win = oracle::periodic_hann(static_cast<std::size_t>(p.window_len));
    double err = 0.0, scale = 0.0;
    for (std::size_t t = 0; t < x.cols(); ++t) {
      std::vector<double> frame(static_cast<std::size_t>(p.fft_size), 0.0);
      for (std::size_t n = 0; n < win.size(); ++n) {
        const std::size_t idx = t * static_cast<std::size_t>(p.hop) + n;
        if (idx < clip.samples.size()) frame[n] = clip.samples[idx] * win[n];
      }
      const auto ref = oracle::naive_dft(frame);
      for (std::size_t k = 0; k < ref.size(); ++k) {
        scale = std::max(scale, std::abs(ref[k]));
        err = std::max(err, std::abs(ref[k] - x(k, t)));
      }
    }
    worst = std::max(worst, err / scale);
  }
  const double secs = seconds_since(t0);
  return {worst < kStftRelTolerance && secs < kStftBudgetSeconds,
          fmt::format("max relative error {:.3g} over {} signals (need < {}), runtime {:.1f} s "
                      "(need < {:.0f} s)",
                      worst, kStftSignals, kStftRelTolerance, secs, kStftBudgetSeconds)};
}

// ---------------------------------------------------------------------------
// 7: synthesizer oracle

Outcome synth_oracle(const fs::path&) {
  const auto spec = default_synth_spec();
  double worst = 0.0;
  int hits = 0, total = 0;
  for (const auto& v : spec.vowels) {
    for (int s = 0; s < kSynthSeeds; ++s) {
      std::mt19937_64 rng(static_cast<std::uint64_t>(s));
      const double f0 = std::uniform_real_distribution<double>(v.f0.lo, v.f0.hi)(rng);
      const double dur = std::uniform_real_distribution<double>(v.duration.lo, v.duration.hi)(rng);
      const auto clip = synth_vowel(v, f0, dur, 22050, static_cast<std::uint64_t>(s));
      const auto peaks = oracle::envelope_peaks(clip.samples, 22050, 4500.0);
      double best = std::numeric_limits<double>::infinity();
      for (const double p : peaks) best = std::min(best, std::abs(p - v.formants[0]));
      worst = std::max(worst, best);
      ++total;
      if (best <= kFormantTolerance) ++hits;
    }
  }
  return {hits == total, fmt::format("{}/{} clips have an envelope peak within {} Hz of F1, "
                                     "worst distance {:.2f} Hz",
                                     hits, total, kFormantTolerance, worst)};
}

// ---------------------------------------------------------------------------
// 8: determinism

std::vector<std::string> artifacts(const fs::path& root) {
  std::vector<std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (!e.is_regular_file()) continue;
    const auto name = e.path().filename().string();
    if (name == "eval_runtime.txt" || name == "config.txt" || name == "run.log") continue;
    out.push_back(fs::relative(e.path(), root).string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

Outcome determinism(const fs::path& work) {
  std::vector<fs::path> dirs{work / "a", work / "b"};
  for (const auto& d : dirs) {
    fs::remove_all(d);
    run_logged(make_run_config({{"experiment", "vowel_fullband"},
                                {"out_dir", d.string()},
                                {"seed", "7"},
                                {"clips_per_class", std::to_string(kDeterminismClipsPerClass)},
                                {"epochs", std::to_string(kDeterminismEpochs)}}));
  }
  const auto files = artifacts(dirs[0]);
  if (files != artifacts(dirs[1])) return {false, "the two runs wrote different file sets"};
  std::size_t differing = 0;
  std::string first;
  for (const auto& f : files) {
    if (read_text_file((dirs[0] / f).string()) != read_text_file((dirs[1] / f).string())) {
      if (differing++ == 0) first = f;
    }
  }
  const bool core_present = std::count(files.begin(), files.end(), "model.sxai") &&
                            std::count(files.begin(), files.end(), "corpus/manifest.csv") &&
                            std::count(files.begin(), files.end(), "confusion.csv");
  return {differing == 0 && core_present,
          differing == 0 ? fmt::format("{} artifacts byte-identical across reruns (corpus, manifest, checkpoint, "
                                       "CSV reports, PNGs; {} clips per class, {} epochs)",
                                       files.size(), kDeterminismClipsPerClass, kDeterminismEpochs)
                         : fmt::format("{} of {} artifacts differ, first {}", differing, files.size(), first)};
}

// ---------------------------------------------------------------------------
// 9: frequency cap

Outcome frequency_cap(const fs::path& work) {
  auto cfg = make_run_config({{"experiment", "vowel_4k"}, {"out_dir", work.string()}, {"seed", "7"}});
  const fs::path reuse = work.parent_path() / "c3" / "seed7" / "corpus" / "manifest.csv";
  if (fs::exists(reuse)) {
    cfg.manifest = reuse.string();
  } else {
    std::ofstream log(work / "synth.log");
    fs::create_directories(work);
    cmd_synth(cfg, log);
  }
  const auto manifest = read_manifest(cfg.manifest_path());
  const fs::path base = fs::path(cfg.manifest_path()).parent_path();
  const auto pipe = cfg.pipeline();
  std::size_t clips = 0, violations = 0;
  double top = 0.0;
  std::set<std::size_t> rows;
  for (const auto& e : manifest.split(Split::kTest)) {
    const auto spec = pipe.spectrogram(read_wav((base / e.path).string()));
    for (std::size_t b = 0; b < spec.n_bins(); ++b) {
      if (spec.freq_of_bin(b) > kCapHz) ++violations;
      top = std::max(top, spec.freq_of_bin(b));
    }
    rows.insert(spec.n_bins());
    ++clips;
  }
  std::string row_text;
  for (const auto r : rows) row_text += (row_text.empty() ? "" : ",") + std::to_string(r);
  return {clips > 0 && violations == 0,
          fmt::format("{} test clips, {} bins above {} Hz, highest bin center {:.2f} Hz, rows {}", clips,
                      violations, kCapHz, top, row_text)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectrocam acceptance checks"};
  std::string work_dir = "acceptance_work";
  std::vector<int> only;
  app.add_option("--work-dir", work_dir, "directory for corpora, models and reports");
  app.add_option("--only", only, "run only these criteria (1-9)")->delimiter(',');
  CLI11_PARSE(app, argc, argv);

  struct Criterion {
    int id;
    std::string title;
    std::function<Outcome(const fs::path&)> run;
  };
  const std::vector<Criterion> criteria{
      {1, "synthetic vowel classification", [](const fs::path& w) { return full_run(w, "vowel_fullband", kVowelMinAccuracy); }},
      {2, "synthetic voiced/unvoiced", [](const fs::path& w) { return full_run(w, "voiced_unvoiced", kVoicingMinAccuracy); }},
      {3, "CAM-formant correspondence", cam_formants},
      {4, "GAP identity", gap_identity},
      {5, "gradient oracle", gradient_oracle},
      {6, "STFT oracle", stft_oracle},
      {7, "synthesizer oracle", synth_oracle},
      {8, "determinism", determinism},
      {9, "frequency capping", frequency_cap},
  };

  const fs::path root = fs::absolute(work_dir);
  fs::create_directories(root);
  std::ofstream report(root / "acceptance_report.txt");
  int failed = 0, ran = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    const fs::path dir = root / fmt::format("c{}", c.id);
    fs::create_directories(dir);
    progress(fmt::format("[criterion {}] {}", c.id, c.title));
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = c.run(dir);
    } catch (const std::exception& e) {
      o = {false, fmt::format("error: {}", e.what())};
    }
    const std::string line = fmt::format("criterion {} ({}): {}  {}  [{:.1f} s]", c.id, c.title,
                                         o.pass ? "PASS" : "FAIL", o.detail, seconds_since(t0));
    std::cout << line << std::endl;
    report << line << "\n";
    ++ran;
    if (!o.pass) ++failed;
  }
  const std::string summary = fmt::format("acceptance: {}/{} criteria passed", ran - failed, ran);
  std::cout << summary << std::endl;
  report << summary << "\n";
  return failed == 0 ? 0 : 1;
}
