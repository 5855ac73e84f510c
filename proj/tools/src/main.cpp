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

#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "run_config.hpp"
#include "spectrocam/error.hpp"
#include "spectrocam/keyvalue.hpp"

namespace {

using namespace spectrocam;
using namespace spectrocam::cli;

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitIo = 4;

struct ConfigOptions {
  std::string file;
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;

  RunConfig load() const {
    Overrides overrides;
    for (const auto& key : config_keys()) {
      const auto* opt = options.at(key.name);
      if (opt->count() > 0) overrides.emplace_back(key.name, values.at(key.name));
    }
    return load_run_config(file, overrides);
  }
};

CLI::App* add_config_command(CLI::App& app, const std::string& name,
                             const std::string& description, ConfigOptions& opts) {
  auto* sub = app.add_subcommand(name, description);
  sub->add_option("-c,--config", opts.file, "`key = value` config file; flags below override it");
  for (const auto& key : config_keys()) {
    opts.options[key.name] = sub->add_option("--" + key.name, opts.values[key.name], key.help);
  }
  sub->footer(
      "Every --key is also a config file key. Unknown keys are errors.\n"
      "Exit codes: 0 success, 2 config error, 3 data error, 4 I/O error.");
  return sub;
}

int report(std::string_view kind, const std::exception& e, int code) {
  std::cerr << "spectrocam: " << kind << ": " << e.what() << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectrocam: spectrogram classifiers explained with class activation maps"};
  app.require_subcommand(1);

  ConfigOptions synth_opts, train_opts, eval_opts, explain_opts, run_opts;
  auto* synth = add_config_command(app, "synth", "Synthesize a labeled corpus and manifest",
                                   synth_opts);
  auto* train = add_config_command(app, "train", "Train on the manifest's train split",
                                   train_opts);
  auto* eval = add_config_command(app, "eval",
                                  "Confusion matrix and report on the test split", eval_opts);
  auto* explain = add_config_command(
      app, "explain", "CAM overlays and frequency profiles for test clips", explain_opts);
  auto* run = add_config_command(app, "run", "synth, train, eval and explain in one go", run_opts);

  ExtractOptions extract_opts;
  std::string keep;
  auto* extract = app.add_subcommand("extract", "Cut aligned phone segments out of recordings");
  extract->add_option("--wav_dir", extract_opts.wav_dir, "directory of <stem>.wav recordings")
      ->required();
  extract->add_option("--alignment_dir", extract_opts.alignment_dir,
                      "directory of <stem>.csv alignments with header start,end,phone")
      ->required();
  extract->add_option("--keep", keep, "comma-separated phones to keep, in label order");
  extract->add_option("--out_dir", extract_opts.out_dir, "output directory for clips and manifest")
      ->required();
  extract->add_flag("--strict", extract_opts.strict,
                    "abort on unpaired files and malformed alignments");
  extract->add_option("--train_fraction", extract_opts.train_fraction,
                      "share of each class in the train split (default 0.7)");
  extract->add_option("--seed", extract_opts.seed, "split seed (default 7)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    std::ostream& log = std::cout;
    if (synth->parsed()) {
      cmd_synth(synth_opts.load(), log);
    } else if (train->parsed()) {
      cmd_train(train_opts.load(), log);
    } else if (eval->parsed()) {
      cmd_eval(eval_opts.load(), log);
    } else if (explain->parsed()) {
      cmd_explain(explain_opts.load(), log);
    } else if (run->parsed()) {
      cmd_run(run_opts.load(), log);
    } else if (extract->parsed()) {
      extract_opts.keep = split_list(keep);
      cmd_extract(extract_opts, log);
    }
  } catch (const ConfigError& e) {
    return report("config error", e, kExitConfig);
  } catch (const IoError& e) {
    return report("I/O error", e, kExitIo);
  } catch (const std::filesystem::filesystem_error& e) {
    return report("I/O error", e, kExitIo);
  } catch (const Error& e) {
    return report("data error", e, kExitData);
  }
  return 0;
}
