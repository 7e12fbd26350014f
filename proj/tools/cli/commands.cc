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

#include "cli/commands.h"

#include <openssl/evp.h>

#include <algorithm>
#include <fstream>
#include <future>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "cli/embeddings_file.h"
#include "rgae/error.h"
#include "rgae/evaluator.h"
#include "rgae/graph.h"
#include "rgae/synthgen.h"

namespace rgae::cli {
namespace fs = std::filesystem;

std::string FileDigest(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kFileError, "cannot open " + path.string());
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr);
  char buf[1 << 14];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    EVP_DigestUpdate(ctx.get(), buf, static_cast<std::size_t>(in.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), digest, &len);
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) {
    hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  }
  return hex.str();
}

namespace {

void EnsureDir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kFileError, "cannot create " + dir.string());
}

std::vector<fs::path> DatasetInputs(const fs::path& dir) {
  std::vector<fs::path> files;
  if (fs::exists(dir / "nodes.txt")) files.push_back(dir / "nodes.txt");
  for (auto& f : DatasetFiles(dir)) files.push_back(f);
  if (fs::exists(dir / "labels.txt")) files.push_back(dir / "labels.txt");
  return files;
}

void AddDigests(KeyValueConfig& manifest, const std::string& prefix,
                const std::vector<fs::path>& files) {
  for (const auto& f : files) manifest.Set(prefix + f.filename().string(), FileDigest(f));
}

void VerifyDigests(const KeyValueConfig& config, const fs::path& data_dir) {
  const std::string prefix = "input.digest.";
  for (const auto& [key, expected] : config.values()) {
    if (key.rfind(prefix, 0) != 0) continue;
    const fs::path file = data_dir / key.substr(prefix.size());
    if (!fs::exists(file) || FileDigest(file) != expected) {
      throw Error(ErrorCode::kConfigError,
                  "input " + file.string() + " does not match the manifest digest");
    }
  }
}

// Reorders embedding rows into the dataset's node order.
Tensor AlignEmbeddings(const EmbeddingsFile& file, const MultiViewNetwork& net) {
  if (file.node_names.size() != net.n) {
    throw Error(ErrorCode::kLengthMismatch,
                "embeddings cover " + std::to_string(file.node_names.size()) +
                    " nodes, dataset has " + std::to_string(net.n));
  }
  std::unordered_map<std::string, std::size_t> row_of;
  for (std::size_t r = 0; r < file.node_names.size(); ++r) row_of[file.node_names[r]] = r;
  Tensor aligned(net.n, file.values.cols());
  for (std::size_t i = 0; i < net.n; ++i) {
    auto it = row_of.find(net.node_names[i]);
    if (it == row_of.end()) {
      throw Error(ErrorCode::kLengthMismatch, "no embedding for node '" + net.node_names[i] + "'");
    }
    auto src = file.values.row(it->second);
    std::copy(src.begin(), src.end(), aligned.row(i).begin());
  }
  return aligned;
}

std::string EvalRow(const std::string& task, double ratio, const std::string& seed,
                    const std::string& metric, double value) {
  return task + '\t' + FormatDouble(ratio) + '\t' + seed + '\t' + metric + '\t' +
         FormatDouble(value) + '\n';
}

double Dispersion(const std::vector<double>& lambda) {
  const auto [lo, hi] = std::minmax_element(lambda.begin(), lambda.end());
  return *hi - *lo;
}

}  // namespace

void CmdGenerate(const KeyValueConfig& config, const fs::path& out_dir) {
  const SynthConfig synth = SynthConfigFromConfig(config);
  const MultiViewNetwork net = GenerateSynthetic(synth);
  EnsureDir(out_dir);
  WriteDataset(net, out_dir);

  KeyValueConfig manifest = SynthConfigToConfig(synth);
  manifest.Set("build.version", kVersion);
  AddDigests(manifest, "output.digest.", DatasetInputs(out_dir));
  WriteFileAtomic(out_dir / "manifest.txt", manifest.Serialize());
}

TrainOutputs CmdTrain(const fs::path& data_dir, const fs::path& out_dir,
                      const KeyValueConfig& config, std::ostream* log) {
  const TrainSettings settings = TrainSettings::FromConfig(config);
  VerifyDigests(config, data_dir);
  const MultiViewNetwork full = LoadDataset(data_dir);
  const MultiViewNetwork net =
      settings.target_view ? full.WithoutView(*settings.target_view) : full;

  std::string history = "epoch\tL_rec\tL_sim\tL_dif\tL_total\tlambda\n";
  TrainOutputs outputs;
  outputs.result = Train(net, settings.train, [&](const EpochRecord& record) {
    const std::string line = FormatEpochRecord(record);
    history += line + '\n';
    if (settings.verbose && log) *log << line << '\n';
  });

  EnsureDir(out_dir);
  outputs.embeddings = out_dir / "embeddings.txt";
  outputs.history = out_dir / "loss_history.tsv";
  outputs.manifest = out_dir / "manifest.txt";

  EmbeddingsFile file;
  file.node_names = net.node_names;
  file.num_views = net.num_views();
  file.block_dim = BlockDim(settings.train.total_dim, net.num_views());
  file.values = outputs.result.embeddings.final;
  file.Write(outputs.embeddings);
  WriteFileAtomic(outputs.history, history);

  KeyValueConfig manifest = settings.ToConfig();
  manifest.Set("build.version", kVersion);
  AddDigests(manifest, "input.digest.", DatasetInputs(data_dir));
  manifest.Set("output.embeddings", outputs.embeddings.filename().string());
  manifest.Set("output.history", outputs.history.filename().string());
  manifest.Set("result.epochs", std::to_string(outputs.result.history.size()));
  manifest.Set("result.converged", outputs.result.converged ? "true" : "false");
  WriteFileAtomic(outputs.manifest, manifest.Serialize());
  return outputs;
}

void CmdEval(const EvalOptions& options) {
  if (options.repeats == 0) throw Error(ErrorCode::kConfigError, "repeats must be >= 1");
  const MultiViewNetwork net = LoadDataset(options.data_dir);
  const Tensor embeddings = AlignEmbeddings(EmbeddingsFile::Read(options.embeddings), net);

  std::string report = "task\ttrain_ratio\tseed\tmetric\tvalue\n";
  if (options.task == "classify") {
    if (!net.labels) throw Error(ErrorCode::kConfigError, "dataset has no labels.txt");
    for (double ratio : options.train_ratios) {
      double micro = 0.0, macro = 0.0;
      for (std::size_t seed = 0; seed < options.repeats; ++seed) {
        const auto result = EvaluateClassification(embeddings, *net.labels, {ratio, seed, true});
        report += EvalRow("classify", ratio, std::to_string(seed), "micro_f1", result.f1.micro);
        report += EvalRow("classify", ratio, std::to_string(seed), "macro_f1", result.f1.macro);
        micro += result.f1.micro;
        macro += result.f1.macro;
      }
      const double k = static_cast<double>(options.repeats);
      report += EvalRow("classify", ratio, "mean", "micro_f1", micro / k);
      report += EvalRow("classify", ratio, "mean", "macro_f1", macro / k);
    }
  } else if (options.task == "link") {
    if (!options.target_view) {
      throw Error(ErrorCode::kConfigError, "link prediction needs --target-view");
    }
    for (double ratio : options.train_ratios) {
      double auc = 0.0, ap = 0.0;
      for (std::size_t seed = 0; seed < options.repeats; ++seed) {
        const LinkPredTask task = MakeLinkTask(net, *options.target_view, seed);
        const LinkMetrics m = LinkPredict(embeddings, task, {ratio, seed, true});
        report += EvalRow("link", ratio, std::to_string(seed), "roc_auc", m.roc_auc);
        report += EvalRow("link", ratio, std::to_string(seed), "average_precision",
                          m.average_precision);
        auc += m.roc_auc;
        ap += m.average_precision;
      }
      const double k = static_cast<double>(options.repeats);
      report += EvalRow("link", ratio, "mean", "roc_auc", auc / k);
      report += EvalRow("link", ratio, "mean", "average_precision", ap / k);
    }
  } else {
    throw Error(ErrorCode::kConfigError, "unknown task '" + options.task + "'");
  }
  WriteFileAtomic(options.out, report);
}

double MeanPairwiseJaccard(const Tensor& jaccard) {
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < jaccard.rows(); ++i) {
    for (std::size_t j = i + 1; j < jaccard.cols(); ++j) {
      sum += jaccard(i, j);
      ++count;
    }
  }
  return count == 0 ? 1.0 : sum / static_cast<double>(count);
}

Tensor CmdAnalyze(const fs::path& data_dir, const std::optional<fs::path>& out, std::ostream* log) {
  const MultiViewNetwork net = LoadDataset(data_dir);
  const Tensor jaccard = JaccardConsistency(net);
  std::string table = "view";
  for (std::size_t j = 0; j < jaccard.cols(); ++j) table += "\tview_" + std::to_string(j);
  table += '\n';
  for (std::size_t i = 0; i < jaccard.rows(); ++i) {
    table += "view_" + std::to_string(i);
    for (std::size_t j = 0; j < jaccard.cols(); ++j) table += '\t' + FormatDouble(jaccard(i, j));
    table += '\n';
  }
  table += "mean_pairwise\t" + FormatDouble(MeanPairwiseJaccard(jaccard)) + '\n';
  if (out) WriteFileAtomic(*out, table);
  if (log) *log << table;
  return jaccard;
}

std::vector<SweepRow> CmdSweep(const SweepOptions& options) {
  const KeyValueConfig grid = KeyValueConfig::Load(options.grid);
  const MultiViewNetwork full = LoadDataset(options.data_dir);
  if (!full.labels) throw Error(ErrorCode::kConfigError, "sweep needs a labeled dataset");
  const TrainSettings base = TrainSettings::FromConfig(options.base);
  const MultiViewNetwork net = base.target_view ? full.WithoutView(*base.target_view) : full;

  struct Point {
    std::string param;
    std::string value;
    TrainConfig config;
  };
  std::vector<Point> points;
  for (const auto& [param, values] : grid.values()) {
    for (const auto& value : ParseDoubleList(param, values)) {
      KeyValueConfig cfg = options.base;
      cfg.Set(param, FormatDouble(value));
      points.push_back({param, FormatDouble(value), TrainSettings::FromConfig(cfg).train});
    }
  }

  auto run = [&](const Point& p) {
    SweepRow row{p.param, p.value};
    const TrainResult result = Train(net, p.config);
    for (std::size_t seed = 0; seed < options.repeats; ++seed) {
      const auto eval = EvaluateClassification(result.embeddings.final, *full.labels,
                                               {options.train_ratio, seed, true});
      row.micro_f1 += eval.f1.micro;
      row.macro_f1 += eval.f1.macro;
    }
    row.micro_f1 /= static_cast<double>(options.repeats);
    row.macro_f1 /= static_cast<double>(options.repeats);
    row.lambda_dispersion = Dispersion(result.params.lambda);
    row.final_loss = result.history.empty() ? 0.0 : result.history.back().total;
    row.epochs = result.history.size();
    return row;
  };

  // Grid points are independent runs; results keep grid order.
  std::vector<SweepRow> rows;
  const std::size_t jobs = std::max<std::size_t>(options.jobs, 1);
  for (std::size_t start = 0; start < points.size(); start += jobs) {
    std::vector<std::future<SweepRow>> batch;
    for (std::size_t i = start; i < std::min(points.size(), start + jobs); ++i) {
      batch.push_back(std::async(jobs == 1 ? std::launch::deferred : std::launch::async, run,
                                 std::cref(points[i])));
    }
    for (auto& f : batch) rows.push_back(f.get());
  }

  std::string table = "param\tvalue\tmicro_f1\tmacro_f1\tlambda_dispersion\tfinal_loss\tepochs\n";
  for (const auto& r : rows) {
    table += r.param + '\t' + r.value + '\t' + FormatDouble(r.micro_f1) + '\t' +
             FormatDouble(r.macro_f1) + '\t' + FormatDouble(r.lambda_dispersion) + '\t' +
             FormatDouble(r.final_loss) + '\t' + std::to_string(r.epochs) + '\n';
  }
  EnsureDir(options.out_dir);
  WriteFileAtomic(options.out_dir / "sweep.tsv", table);
  KeyValueConfig manifest = base.ToConfig();
  manifest.Set("build.version", kVersion);
  AddDigests(manifest, "input.digest.", DatasetInputs(options.data_dir));
  for (const auto& [param, values] : grid.values()) manifest.Set("grid." + param, values);
  manifest.Set("sweep.train_ratio", FormatDouble(options.train_ratio));
  manifest.Set("sweep.repeats", std::to_string(options.repeats));
  WriteFileAtomic(options.out_dir / "manifest.txt", manifest.Serialize());
  return rows;
}

}  // namespace rgae::cli
