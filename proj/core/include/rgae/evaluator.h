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

#ifndef RGAE_EVALUATOR_H_
#define RGAE_EVALUATOR_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rgae/graph.h"
#include "rgae/tensor.h"

namespace rgae {

struct SplitSpec {
  double train_ratio = 0.5;
  std::uint64_t seed = 0;
  bool stratified = true;

  void Validate() const;
};

struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

// Shuffled split of 0..n-1 with round(n * ratio) training items, clamped so
// both sides are non-empty. Throws InsufficientNodes for n < 2.
Split MakeSplit(std::size_t n, const SplitSpec& spec);

// Per-stratum split of positions 0..strata.size()-1: each stratum keeps
// round(count * ratio) items (at least one on each side when it has two).
Split MakeStratifiedSplit(std::span<const int> strata, const SplitSpec& spec);

struct LogisticOptions {
  double l2 = 1e-4;
  std::size_t iterations = 500;
};

// One-vs-rest logistic regression on mean-centered features.
class OvrClassifier {
 public:
  // Row r of the result holds one probability per class.
  Tensor PredictProba(const Tensor& features) const;

  std::size_t num_classes() const { return weights_.rows(); }
  // Classes with no positive training example; they always score 0.
  const std::vector<int>& skipped_classes() const { return skipped_; }

 private:
  friend OvrClassifier TrainLogisticOvr(const Tensor&, std::span<const std::vector<int>>,
                                        std::span<const std::size_t>, std::size_t,
                                        const LogisticOptions&);
  Tensor weights_;  // num_classes x (features + 1), bias last
  std::vector<double> mean_;
  std::vector<int> skipped_;
};

// Accelerated full-batch gradient descent (step 1/L) on the mean logistic
// loss plus l2/2 * ||w||^2 (bias unpenalized). Deterministic.
OvrClassifier TrainLogisticOvr(const Tensor& features, std::span<const std::vector<int>> labels,
                               std::span<const std::size_t> train, std::size_t num_classes,
                               const LogisticOptions& options = {});

// Argmax per row (ties to the lower class id).
std::vector<std::vector<int>> PredictSingleLabel(const Tensor& proba);
// Classes with probability >= threshold per row.
std::vector<std::vector<int>> PredictMultiLabel(const Tensor& proba, double threshold = 0.5);

struct F1Scores {
  double micro = 0.0;
  double macro = 0.0;
};

// Micro-F1 pools TP/FP/FN over classes. Macro-F1 averages per-class F1 over
// classes that occur in `truth`; a class with TP = 0 scores 0.
F1Scores MicroMacroF1(std::span<const std::vector<int>> predicted,
                      std::span<const std::vector<int>> truth, std::size_t num_classes);

struct ClassificationResult {
  F1Scores f1;
  std::vector<int> skipped_classes;
};

// Trains on a split of the labeled nodes and scores the rest. Multi-label
// sets use a 0.5 threshold, single-label sets use argmax.
ClassificationResult EvaluateClassification(const Tensor& embeddings, const NodeLabels& labels,
                                            const SplitSpec& split,
                                            const LogisticOptions& options = {});

struct NodePair {
  std::uint32_t u = 0;
  std::uint32_t v = 0;
  friend bool operator==(const NodePair&, const NodePair&) = default;
};

struct LinkPredTask {
  std::size_t target_view = 0;
  std::vector<NodePair> positives;
  std::vector<NodePair> negatives;
};

// `count` distinct unordered non-edges of `view`. Throws InsufficientNodes if
// the view has fewer non-edges than requested.
std::vector<NodePair> SampleNegatives(const SparseAdjacency& view, std::size_t count,
                                      std::uint64_t seed);

// Positives: every edge of the target view; negatives: as many sampled
// non-edges of that view.
LinkPredTask MakeLinkTask(const MultiViewNetwork& net, std::size_t target_view,
                          std::uint64_t seed);

// Cosine similarity; sets *zero_vector and returns 0 if either side is zero.
double CosineSimilarity(std::span<const double> a, std::span<const double> b,
                        bool* zero_vector = nullptr);

// Rank statistic; tied scores contribute 1/2.
double RocAuc(std::span<const double> scores, std::span<const int> labels);
// Sum over distinct thresholds of (R_k - R_{k-1}) * P_k.
double AveragePrecision(std::span<const double> scores, std::span<const int> labels);

struct LinkMetrics {
  double roc_auc = 0.0;
  double average_precision = 0.0;
  std::size_t zero_vector_pairs = 0;
};

// Cosine feature per pair, logistic fit on the training split, AUC/AP on the
// held-out pairs. `labels` are 1 for links and 0 otherwise.
LinkMetrics LinkPredictPairs(const Tensor& embeddings, std::span<const NodePair> pairs,
                             std::span<const int> labels, const SplitSpec& split);
LinkMetrics LinkPredict(const Tensor& embeddings, const LinkPredTask& task,
                        const SplitSpec& split);

}  // namespace rgae

#endif  // RGAE_EVALUATOR_H_
