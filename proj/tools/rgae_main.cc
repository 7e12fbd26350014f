// Copyright 2026 The RGAE Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cli/commands.h"
#include "cli/config.h"
#include "rgae/error.h"

namespace {

namespace fs = std::filesystem;
using rgae::cli::KeyValueConfig;

// Training flags shared by `train` and `sweep`; set flags override --config.
struct TrainFlags {
  std::optional<std::string> alpha, beta, gamma, dim, layers, lr, epochs, seed, ablate;
  std::optional<std::size_t> target_view;
  bool verbose = false;

  void Register(CLI::App* app) {
    app->add_option("--alpha", alpha, "similarity loss weight");
    app->add_option("--beta", beta, "difference loss weight");
    app->add_option("--gamma", gamma, "view weight exponent");
    app->add_option("--dim", dim, "total embedding dimension");
    app->add_option("--layers", layers, "hidden layer sizes, comma separated");
    app->add_option("--lr", lr, "Adam learning rate");
    app->add_option("--epochs", epochs, "maximum epochs");
    app->add_option("--seed", seed, "initialization seed");
    app->add_option("--ablate", ablate, "none|sim|dif|both");
    app->add_option("--target-view", target_view, "view withheld from training");
    app->add_flag("--verbose", verbose, "stream per-epoch losses");
  }

  void Apply(KeyValueConfig& config) const {
    const std::pair<const char*, const std::optional<std::string>*> entries[] = {
        {"alpha", &alpha}, {"beta", &beta}, {"gamma", &gamma},   {"dim", &dim},
        {"layers", &layers}, {"lr", &lr},   {"epochs", &epochs}, {"seed", &seed},
        {"ablate", &ablate}};
    for (const auto& [key, value] : entries) {
      if (*value) config.Set(key, **value);
    }
    if (target_view) config.Set("target_view", std::to_string(*target_view));
    if (verbose) config.Set("verbose", "true");
  }
};

KeyValueConfig LoadConfig(const std::optional<fs::path>& path) {
  return path ? KeyValueConfig::Load(*path) : KeyValueConfig{};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust multi-view graph autoencoder embeddings"};
  app.set_version_flag("--version", rgae::cli::kVersion);
  app.require_subcommand(1);

  std::optional<fs::path> config_path;

  // generate
  fs::path gen_out;
  std::optional<std::string> gen_seed;
  auto* generate = app.add_subcommand("generate", "write a synthetic multi-view dataset");
  generate->add_option("--out", gen_out, "output dataset directory")->required();
  generate->add_option("--config", config_path, "key=value synthetic config")->check(CLI::ExistingFile);
  generate->add_option("--seed", gen_seed, "generator seed");

  // train
  fs::path train_data, train_out;
  TrainFlags train_flags;
  auto* train = app.add_subcommand("train", "train embeddings on a dataset");
  train->add_option("--data", train_data, "dataset directory")->required()->check(CLI::ExistingDirectory);
  train->add_option("--out", train_out, "output directory")->required();
  train->add_option("--config", config_path, "key=value config or earlier manifest")
      ->check(CLI::ExistingFile);
  train_flags.Register(train);

  // eval
  rgae::cli::EvalOptions eval_options;
  std::optional<std::vector<double>> eval_ratios;
  auto* eval = app.add_subcommand("eval", "score embeddings");
  eval->add_option("--data", eval_options.data_dir, "dataset directory")
      ->required()
      ->check(CLI::ExistingDirectory);
  eval->add_option("--embeddings", eval_options.embeddings, "embeddings file")
      ->required()
      ->check(CLI::ExistingFile);
  eval->add_option("--out", eval_options.out, "report path")->required();
  eval->add_option("--task", eval_options.task, "classify|link")
      ->check(CLI::IsMember({"classify", "link"}));
  eval->add_option("--train-ratio", eval_ratios, "training fractions")->delimiter(',');
  eval->add_option("--target-view", eval_options.target_view, "view holding link-prediction pairs");
  eval->add_option("--repeats", eval_options.repeats, "split seeds per ratio");

  // analyze
  fs::path analyze_data;
  std::optional<fs::path> analyze_out;
  auto* analyze = app.add_subcommand("analyze", "pairwise view consistency");
  analyze->add_option("--data", analyze_data, "dataset directory")
      ->required()
      ->check(CLI::ExistingDirectory);
  analyze->add_option("--out", analyze_out, "optional table path");

  // sweep
  rgae::cli::SweepOptions sweep_options;
  TrainFlags sweep_flags;
  auto* sweep = app.add_subcommand("sweep", "one-at-a-time hyperparameter sweep");
  sweep->add_option("--data", sweep_options.data_dir, "dataset directory")
      ->required()
      ->check(CLI::ExistingDirectory);
  sweep->add_option("--grid", sweep_options.grid, "key=v1,v2,... per parameter")
      ->required()
      ->check(CLI::ExistingFile);
  sweep->add_option("--out", sweep_options.out_dir, "output directory")->required();
  sweep->add_option("--config", config_path, "base config")->check(CLI::ExistingFile);
  sweep->add_option("--train-ratio", sweep_options.train_ratio, "classifier training fraction");
  sweep->add_option("--repeats", sweep_options.repeats, "split seeds per point");
  sweep->add_option("--jobs", sweep_options.jobs, "parallel training runs");
  sweep_flags.Register(sweep);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*generate) {
      KeyValueConfig config = LoadConfig(config_path);
      if (gen_seed) config.Set("seed", *gen_seed);
      rgae::cli::CmdGenerate(config, gen_out);
    } else if (*train) {
      KeyValueConfig config = LoadConfig(config_path);
      train_flags.Apply(config);
      rgae::cli::CmdTrain(train_data, train_out, config, &std::cout);
    } else if (*eval) {
      if (eval_ratios) eval_options.train_ratios = *eval_ratios;
      rgae::cli::CmdEval(eval_options);
    } else if (*analyze) {
      rgae::cli::CmdAnalyze(analyze_data, analyze_out, &std::cout);
    } else if (*sweep) {
      sweep_options.base = LoadConfig(config_path);
      sweep_flags.Apply(sweep_options.base);
      rgae::cli::CmdSweep(sweep_options);
    }
  } catch (const rgae::Error& e) {
    std::cerr << "error: " << rgae::ErrorCodeName(e.code()) << ": " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
