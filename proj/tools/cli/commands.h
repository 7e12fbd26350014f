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

#ifndef RGAE_TOOLS_CLI_COMMANDS_H_
#define RGAE_TOOLS_CLI_COMMANDS_H_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cli/config.h"
#include "rgae/tensor.h"
#include "rgae/trainer.h"

namespace rgae::cli {

inline constexpr const char* kVersion = "0.1.0";

// Hex SHA-256 of a file's bytes.
std::string FileDigest(const std::filesystem::path& path);

// Writes a synthetic dataset plus manifest.txt into out_dir.
void CmdGenerate(const KeyValueConfig& config, const std::filesystem::path& out_dir);

struct TrainOutputs {
  std::filesystem::path embeddings;
  std::filesystem::path history;
  std::filesystem::path manifest;
  TrainResult result;
};

// Trains on data_dir (minus target_view when set) and writes
// embeddings.txt, loss_history.tsv and manifest.txt into out_dir. A manifest
// from an earlier run is accepted as config; its input digests must match.
TrainOutputs CmdTrain(const std::filesystem::path& data_dir, const std::filesystem::path& out_dir,
                      const KeyValueConfig& config, std::ostream* log = nullptr);

struct EvalOptions {
  std::filesystem::path data_dir;
  std::filesystem::path embeddings;
  std::filesystem::path out;
  // "classify" or "link".
  std::string task = "classify";
  std::vector<double> train_ratios = {0.1, 0.3, 0.5};
  std::optional<std::size_t> target_view;
  std::size_t repeats = 10;
};

// Tab-separated report: task, train_ratio, seed, metric, value. Seeds run
// 0..repeats-1, followed by a "mean" row per metric.
void CmdEval(const EvalOptions& options);

// Pairwise Jaccard table written to `out` (when set) and `log`.
Tensor CmdAnalyze(const std::filesystem::path& data_dir,
                  const std::optional<std::filesystem::path>& out, std::ostream* log = nullptr);
// Mean of the off-diagonal Jaccard entries.
double MeanPairwiseJaccard(const Tensor& jaccard);

struct SweepOptions {
  std::filesystem::path data_dir;
  std::filesystem::path grid;
  std::filesystem::path out_dir;
  KeyValueConfig base;
  double train_ratio = 0.5;
  std::size_t repeats = 10;
  std::size_t jobs = 1;
};

struct SweepRow {
  std::string param;
  std::string value;
  double micro_f1 = 0.0;
  double macro_f1 = 0.0;
  // max(lambda) - min(lambda) after training.
  double lambda_dispersion = 0.0;
  double final_loss = 0.0;
  std::size_t epochs = 0;
};

// One-at-a-time sweep: each grid key's values are tried with every other
// setting held at the base config. Writes out_dir/sweep.tsv.
std::vector<SweepRow> CmdSweep(const SweepOptions& options);

}  // namespace rgae::cli

#endif  // RGAE_TOOLS_CLI_COMMANDS_H_
