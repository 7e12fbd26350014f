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

// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <random>
#include <sstream>
#include <string>

#include "cli/commands.h"
#include "cli/config.h"
#include "rgae/evaluator.h"
#include "rgae/model.h"
#include "rgae/synthgen.h"
#include "rgae/tape.h"
#include "rgae/trainer.h"
#include "support/oracle.h"

namespace {

namespace fs = std::filesystem;
using namespace rgae;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string Fmt(const char* format, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), format, a, b, c, d);
  return buf;
}

double Seconds(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - since).count();
}

fs::path Scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("rgae_acceptance_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

Outcome GradientCheck() {
  const auto start = std::chrono::steady_clock::now();
  const MultiViewNetwork net = oracle::RandomNetwork(10, 2, 0.3, 2024);
  const auto views = PrepareViews(net);
  RgaeParams params = RgaeParams::Initialize(10, 2, {{5, 3}}, 2024);
  params.lambda = {0.4, 0.6};
  const double alpha = 0.5, beta = 0.5, gamma = 5.0;

  Tape tape;
  const LossGraph g = RecordTotalLoss(tape, views, params, {alpha, beta, gamma});
  tape.Backward(g.total);
  std::vector<Tensor> grads;
  for (Var w : g.params.shared_weights) grads.push_back(tape.grad(w));
  for (const auto& stack : g.params.private_weights) {
    for (Var w : stack) grads.push_back(tape.grad(w));
  }

  const double h = 1e-5;
  double worst = 0.0;
  std::size_t checked = 0;
  auto pointers = params.WeightPointers();
  for (std::size_t m = 0; m < pointers.size(); ++m) {
    for (std::size_t k = 0; k < pointers[m]->size(); ++k) {
      double& entry = pointers[m]->data()[k];
      const double saved = entry;
      entry = saved + h;
      const double up = oracle::TotalLoss(net, params, alpha, beta, gamma).total;
      entry = saved - h;
      const double down = oracle::TotalLoss(net, params, alpha, beta, gamma).total;
      entry = saved;
      worst = std::max(worst, oracle::RelativeError(grads[m].data()[k], (up - down) / (2 * h), 1e-3));
      ++checked;
    }
  }
  const double elapsed = Seconds(start);
  return {worst < 1e-4 && elapsed < 30.0,
          Fmt("max rel err %.2e over %.0f weights, %.2fs", worst, double(checked), elapsed)};
}

Outcome ForwardOracle() {
  std::mt19937_64 rng(77);
  double worst = 0.0;
  for (int instance = 0; instance < 20; ++instance) {
    const std::size_t n = 4 + rng() % 9;
    const std::size_t num_views = 1 + rng() % 3;
    LayerSpec layers;
    for (std::size_t l = 0, depth = 1 + rng() % 3; l < depth; ++l) layers.sizes.push_back(1 + rng() % 6);
    const MultiViewNetwork net = oracle::RandomNetwork(n, num_views, 0.4, rng());
    const RgaeParams params = RgaeParams::Initialize(n, num_views, layers, rng());
    for (std::size_t v = 0; v < num_views; ++v) {
      Tape tape;
      const ViewOutputs out =
          ForwardView(tape, Normalize(net.views[v]), RecordParams(tape, params, false), v);
      const auto expected =
          oracle::Forward(oracle::NormalizeDense(oracle::Dense(net.views[v])), params, v);
      worst = std::max({worst, oracle::MaxAbsDiff(tape.value(out.shared), expected.shared),
                        oracle::MaxAbsDiff(tape.value(out.priv), expected.priv),
                        oracle::MaxAbsDiff(tape.value(out.reconstruction), expected.reconstruction)});
    }
  }
  return {worst < 1e-12, Fmt("max abs diff %.2e over 20 instances", worst)};
}

Outcome LambdaLimits() {
  const std::vector<double> b = {1.0, 4.0};
  const auto flat = UpdateLambda(b, 500.0);
  const double spread = std::max(std::abs(flat[0] - 0.5), std::abs(flat[1] - 0.5));
  const auto sharp = UpdateLambda(b, 1.01);
  return {spread < 0.01 && sharp[0] > 0.99,
          Fmt("gamma=500: max|lambda-0.5| = %.4g; gamma=1.01: lambda_min_B = %.6f", spread, sharp[0])};
}

Outcome LossIdentities() {
  const SparseAdjacency adj = oracle::RandomGraph(12, 0.3, 5);
  const ReconstructionTarget rec = MakeReconstructionTarget(adj);
  double ones = 0.0;
  for (double t : rec.target->data()) ones += t;
  const double zeros = static_cast<double>(rec.target->size()) - ones;
  Tape tape;
  const double bce = tape.value(tape.BalancedBce(tape.Constant(Tensor(12, 12, 0.5)), rec.target,
                                                 rec.positive_weight))
                         .item();
  const double expected = (ones * rec.positive_weight + zeros) * std::log(2.0);
  const double bce_err = std::abs(bce - expected);

  Tensor shared = oracle::RandomTensor(12, 4, 6);
  Tensor priv(12, 4);
  for (std::size_t i = 0; i < 12; ++i) {
    priv(i, 0) = shared(i, 1);
    priv(i, 1) = -shared(i, 0);
    priv(i, 2) = shared(i, 3);
    priv(i, 3) = -shared(i, 2);
  }
  const double dif =
      tape.value(DifferenceLoss(tape, tape.Constant(shared), tape.Constant(priv))).item();

  const Var y = tape.Constant(oracle::RandomTensor(12, 4, 7));
  const std::vector<Var> same = {y, y, y};
  const std::vector<double> lambda = {0.2, 0.3, 0.5};
  const double sim =
      tape.value(SimilarityLoss(tape, same, ConsistentEmbedding(tape, same, lambda, 5.0), lambda, 5.0))
          .item();
  return {bce_err < 1e-9 && dif == 0.0 && sim == 0.0,
          Fmt("|bce - (nnz*w + nz)ln2| = %.2e, difference = %g, similarity = %g", bce_err, dif, sim)};
}

TrainConfig RecoveryConfig(std::uint64_t seed) {
  TrainConfig config;
  config.total_dim = 32;
  config.hidden_sizes = {32, 16};
  config.alpha = 0.5;
  config.beta = 0.5;
  config.gamma = 5.0;
  config.lr = 0.01;
  config.max_epochs = 500;
  config.seed = seed;
  return config;
}

struct AblationScores {
  double full = 0.0, no_dif = 0.0, no_sim = 0.0, no_both = 0.0;
  double seconds_full = 0.0;
};

AblationScores RunAblations() {
  const SynthConfig synth;  // n=60, k=3, 2 views, p_in .3, p_out .02, f .5, seed 7
  const MultiViewNetwork net = GenerateSynthetic(synth);
  AblationScores s;
  auto mean_micro = [&](bool sim, bool dif) {
    double total = 0.0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      TrainConfig config = RecoveryConfig(seed);
      config.use_similarity = sim;
      config.use_difference = dif;
      const TrainResult result = Train(net, config);
      total += EvaluateClassification(result.embeddings.final, *net.labels, {0.5, seed, true}).f1.micro;
    }
    return total / 10.0;
  };
  const auto start = std::chrono::steady_clock::now();
  s.full = mean_micro(true, true);
  s.seconds_full = Seconds(start);
  s.no_dif = mean_micro(true, false);
  s.no_sim = mean_micro(false, true);
  s.no_both = mean_micro(false, false);
  return s;
}

Outcome CommunityRecovery(const AblationScores& s) {
  return {s.full >= 0.85 && s.seconds_full < 300.0,
          Fmt("mean Micro-F1 %.4f over seeds 0-9, %.1fs", s.full, s.seconds_full)};
}

Outcome AblationOrdering(const AblationScores& s) {
  const double gap = s.full - s.no_both;
  return {s.full >= s.no_dif && s.full >= s.no_both && gap >= 0.02,
          Fmt("full %.4f, no-dif %.4f, no-both %.4f (gap %.4f)", s.full, s.no_dif, s.no_both, gap) +
              Fmt(", no-sim %.4f", s.no_sim)};
}

Outcome LinkPrediction() {
  SynthConfig synth;
  synth.views = 3;
  synth.unique_frac = 0.2;
  synth.seed = 11;
  const MultiViewNetwork net = GenerateSynthetic(synth);
  const std::size_t target = 2;
  const MultiViewNetwork train_net = net.WithoutView(target);
  double auc = 0.0, ap = 0.0, control = 0.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    TrainConfig config = RecoveryConfig(seed);
    config.max_epochs = 300;
    const TrainResult result = Train(train_net, config);
    const LinkPredTask task = MakeLinkTask(net, target, seed);
    const LinkMetrics m = LinkPredict(result.embeddings.final, task, {0.5, seed, true});
    auc += m.roc_auc / 10;
    ap += m.average_precision / 10;

    std::vector<NodePair> pairs = task.positives;
    pairs.insert(pairs.end(), task.negatives.begin(), task.negatives.end());
    std::vector<int> labels(task.positives.size(), 1);
    labels.resize(pairs.size(), 0);
    std::mt19937_64 rng(seed + 1000);
    std::shuffle(labels.begin(), labels.end(), rng);
    control += LinkPredictPairs(result.embeddings.final, pairs, labels, {0.5, seed, true}).roc_auc / 10;
  }
  return {auc >= 0.80 && ap >= 0.80 && std::abs(control - 0.5) <= 0.05,
          Fmt("ROC-AUC %.4f, AP %.4f, shuffled-label AUC %.4f", auc, ap, control)};
}

Outcome JaccardAnalysis() {
  const fs::path dir = Scratch("jaccard");
  std::vector<double> means;
  bool exact_ones = false;
  std::string detail = "mean pairwise Jaccard:";
  for (const char* frac : {"0", "0.5", "1", "2"}) {
    cli::KeyValueConfig gen;
    gen.Set("views", "3");
    gen.Set("unique_frac", frac);
    cli::CmdGenerate(gen, dir / frac);
    const Tensor j = cli::CmdAnalyze(dir / frac, std::nullopt);
    if (means.empty()) {
      exact_ones = std::all_of(j.data().begin(), j.data().end(), [](double x) { return x == 1.0; });
    }
    means.push_back(cli::MeanPairwiseJaccard(j));
    detail += std::string(" ") + frac + "->" + cli::FormatDouble(std::round(means.back() * 1e4) / 1e4);
  }
  fs::remove_all(dir);
  bool decreasing = true;
  for (std::size_t i = 1; i < means.size(); ++i) decreasing = decreasing && means[i] < means[i - 1];
  return {exact_ones && decreasing, detail};
}

std::string Slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome Determinism() {
  const fs::path dir = Scratch("determinism");
  cli::CmdGenerate({}, dir / "data");
  const cli::TrainOutputs first = cli::CmdTrain(dir / "data", dir / "a", {});
  const cli::TrainOutputs second =
      cli::CmdTrain(dir / "data", dir / "b", cli::KeyValueConfig::Load(first.manifest));
  const std::string a = Slurp(first.embeddings);
  const bool same = !a.empty() && a == Slurp(second.embeddings) &&
                    Slurp(first.manifest) == Slurp(second.manifest);
  fs::remove_all(dir);
  return {same, Fmt("embedding files %.0f bytes, ", double(a.size())) +
                    (same ? "identical" : "differ")};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  AblationScores ablation;
  bool ablation_done = false;
  auto scores = [&]() -> const AblationScores& {
    if (!ablation_done) {
      ablation = RunAblations();
      ablation_done = true;
    }
    return ablation;
  };
  const Criterion criteria[] = {
      {"gradient correctness", GradientCheck},
      {"forward-pass oracle equivalence", ForwardOracle},
      {"lambda-update limits", LambdaLimits},
      {"loss identities", LossIdentities},
      {"community recovery", [&] { return CommunityRecovery(scores()); }},
      {"ablation ordering", [&] { return AblationOrdering(scores()); }},
      {"link prediction", LinkPrediction},
      {"jaccard analysis", JaccardAnalysis},
      {"determinism", Determinism},
  };
  int failures = 0;
  int index = 0;
  for (const auto& c : criteria) {
    ++index;
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("threw: ") + e.what()};
    }
    failures += !outcome.pass;
    std::printf("%s criterion %d (%s): %s\n", outcome.pass ? "PASS" : "FAIL", index, c.name,
                outcome.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%d criteria passed\n", index - failures, index);
  return failures == 0 ? 0 : 1;
}
