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

#include "rgae/evaluator.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <unordered_set>

#include "rgae/error.h"

namespace rgae {

void SplitSpec::Validate() const {
  if (!(train_ratio > 0.0 && train_ratio < 1.0)) {
    throw Error(ErrorCode::kConfigError, "train ratio must lie in (0, 1)");
  }
}

namespace {

std::size_t TrainCount(std::size_t count, double ratio) {
  auto k = static_cast<std::size_t>(std::llround(static_cast<double>(count) * ratio));
  if (count >= 2) k = std::clamp<std::size_t>(k, 1, count - 1);
  else k = count;
  return k;
}

double Sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

Split MakeSplit(std::size_t n, const SplitSpec& spec) {
  spec.Validate();
  if (n < 2) throw Error(ErrorCode::kInsufficientNodes, "need at least two items to split");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(spec.seed);
  std::shuffle(order.begin(), order.end(), rng);
  const std::size_t k = TrainCount(n, spec.train_ratio);
  Split split;
  split.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
  split.test.assign(order.begin() + static_cast<std::ptrdiff_t>(k), order.end());
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

Split MakeStratifiedSplit(std::span<const int> strata, const SplitSpec& spec) {
  spec.Validate();
  if (strata.size() < 2) {
    throw Error(ErrorCode::kInsufficientNodes, "need at least two items to split");
  }
  std::map<int, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < strata.size(); ++i) groups[strata[i]].push_back(i);
  std::mt19937_64 rng(spec.seed);
  Split split;
  for (auto& [stratum, members] : groups) {
    std::shuffle(members.begin(), members.end(), rng);
    const std::size_t k = TrainCount(members.size(), spec.train_ratio);
    split.train.insert(split.train.end(), members.begin(),
                       members.begin() + static_cast<std::ptrdiff_t>(k));
    split.test.insert(split.test.end(), members.begin() + static_cast<std::ptrdiff_t>(k),
                      members.end());
  }
  if (split.test.empty()) {
    throw Error(ErrorCode::kInsufficientNodes, "stratified split left no test items");
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

Tensor OvrClassifier::PredictProba(const Tensor& features) const {
  const std::size_t f = mean_.size();
  if (features.cols() != f) {
    throw Error(ErrorCode::kShapeMismatch, "classifier expects " + std::to_string(f) +
                                               " features, got " +
                                               std::to_string(features.cols()));
  }
  Tensor proba(features.rows(), num_classes());
  std::vector<double> z(f);
  for (std::size_t r = 0; r < features.rows(); ++r) {
    for (std::size_t j = 0; j < f; ++j) z[j] = features(r, j) - mean_[j];
    for (std::size_t c = 0; c < num_classes(); ++c) {
      if (std::binary_search(skipped_.begin(), skipped_.end(), static_cast<int>(c))) continue;
      double logit = weights_(c, f);
      for (std::size_t j = 0; j < f; ++j) logit += weights_(c, j) * z[j];
      proba(r, c) = Sigmoid(logit);
    }
  }
  return proba;
}

OvrClassifier TrainLogisticOvr(const Tensor& features, std::span<const std::vector<int>> labels,
                               std::span<const std::size_t> train, std::size_t num_classes,
                               const LogisticOptions& options) {
  if (labels.size() != features.rows()) {
    throw Error(ErrorCode::kLengthMismatch, "features and labels are not row-aligned");
  }
  if (train.empty()) throw Error(ErrorCode::kInsufficientNodes, "empty training set");
  const std::size_t f = features.cols();
  const std::size_t m = train.size();

  OvrClassifier model;
  model.mean_.assign(f, 0.0);
  for (std::size_t i : train) {
    for (std::size_t j = 0; j < f; ++j) model.mean_[j] += features(i, j);
  }
  for (double& v : model.mean_) v /= static_cast<double>(m);

  // Design matrix with a trailing bias column, and the 0/1 targets.
  const std::size_t width = f + 1;
  Tensor x(m, width);
  Tensor y(m, num_classes);
  std::vector<std::size_t> positives(num_classes, 0);
  for (std::size_t r = 0; r < m; ++r) {
    const std::size_t i = train[r];
    for (std::size_t j = 0; j < f; ++j) x(r, j) = features(i, j) - model.mean_[j];
    x(r, f) = 1.0;
    for (int c : labels[i]) {
      if (c < 0 || static_cast<std::size_t>(c) >= num_classes) {
        throw Error(ErrorCode::kIndexOutOfRange, "label id out of range");
      }
      y(r, static_cast<std::size_t>(c)) = 1.0;
      ++positives[static_cast<std::size_t>(c)];
    }
  }
  for (std::size_t c = 0; c < num_classes; ++c) {
    if (positives[c] == 0) model.skipped_.push_back(static_cast<int>(c));
  }

  // Lipschitz constant of the gradient: 0.25 * lambda_max(X^T X / m) + l2.
  const Tensor gram = MatMulTransA(x, x);
  std::vector<double> vec(width, 1.0 / std::sqrt(static_cast<double>(width)));
  double top = 0.0;
  for (int it = 0; it < 100; ++it) {
    std::vector<double> next(width, 0.0);
    for (std::size_t a = 0; a < width; ++a) {
      for (std::size_t b = 0; b < width; ++b) next[a] += gram(a, b) * vec[b];
    }
    double norm = 0.0;
    for (double v : next) norm += v * v;
    norm = std::sqrt(norm);
    if (norm == 0.0) break;
    top = norm;
    for (std::size_t a = 0; a < width; ++a) vec[a] = next[a] / norm;
  }
  const double lipschitz = 0.25 * top / static_cast<double>(m) + options.l2;
  const double step = 1.0 / std::max(lipschitz, 1e-12);

  Tensor w(num_classes, width);
  Tensor w_prev = w;
  double momentum_t = 1.0;
  for (std::size_t it = 0; it < options.iterations; ++it) {
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum_t * momentum_t));
    const double mix = (momentum_t - 1.0) / t_next;
    Tensor look = w;
    for (std::size_t k = 0; k < look.size(); ++k) {
      look.data()[k] += mix * (w.data()[k] - w_prev.data()[k]);
    }
    // residual = sigmoid(X look^T) - Y, gradient = residual^T X / m + l2 * look.
    Tensor residual = MatMulTransB(x, look);
    for (std::size_t k = 0; k < residual.size(); ++k) {
      residual.data()[k] = Sigmoid(residual.data()[k]) - y.data()[k];
    }
    Tensor grad = MatMulTransA(residual, x);
    for (std::size_t c = 0; c < num_classes; ++c) {
      for (std::size_t j = 0; j < width; ++j) {
        double g = grad(c, j) / static_cast<double>(m);
        if (j < f) g += options.l2 * look(c, j);
        look(c, j) -= step * g;
      }
    }
    w_prev = std::move(w);
    w = std::move(look);
    momentum_t = t_next;
  }
  model.weights_ = std::move(w);
  return model;
}

std::vector<std::vector<int>> PredictSingleLabel(const Tensor& proba) {
  std::vector<std::vector<int>> out(proba.rows());
  for (std::size_t r = 0; r < proba.rows(); ++r) {
    auto row = proba.row(r);
    out[r] = {static_cast<int>(std::max_element(row.begin(), row.end()) - row.begin())};
  }
  return out;
}

std::vector<std::vector<int>> PredictMultiLabel(const Tensor& proba, double threshold) {
  std::vector<std::vector<int>> out(proba.rows());
  for (std::size_t r = 0; r < proba.rows(); ++r) {
    for (std::size_t c = 0; c < proba.cols(); ++c) {
      if (proba(r, c) >= threshold) out[r].push_back(static_cast<int>(c));
    }
  }
  return out;
}

F1Scores MicroMacroF1(std::span<const std::vector<int>> predicted,
                      std::span<const std::vector<int>> truth, std::size_t num_classes) {
  if (predicted.size() != truth.size()) {
    throw Error(ErrorCode::kLengthMismatch, "prediction and truth lengths differ");
  }
  std::vector<std::size_t> tp(num_classes, 0), fp(num_classes, 0), fn(num_classes, 0);
  auto check = [num_classes](int c) {
    if (c < 0 || static_cast<std::size_t>(c) >= num_classes) {
      throw Error(ErrorCode::kIndexOutOfRange, "class id out of range");
    }
    return static_cast<std::size_t>(c);
  };
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const auto& p = predicted[i];
    const auto& t = truth[i];
    for (int c : p) {
      if (std::find(t.begin(), t.end(), c) != t.end()) ++tp[check(c)];
      else ++fp[check(c)];
    }
    for (int c : t) {
      if (std::find(p.begin(), p.end(), c) == p.end()) ++fn[check(c)];
    }
  }
  auto f1 = [](std::size_t t, std::size_t f_pos, std::size_t f_neg) {
    const std::size_t denom = 2 * t + f_pos + f_neg;
    return denom == 0 ? 0.0 : 2.0 * static_cast<double>(t) / static_cast<double>(denom);
  };
  F1Scores scores;
  std::size_t total_tp = 0, total_fp = 0, total_fn = 0, present = 0;
  double macro_sum = 0.0;
  for (std::size_t c = 0; c < num_classes; ++c) {
    total_tp += tp[c];
    total_fp += fp[c];
    total_fn += fn[c];
    if (tp[c] + fn[c] > 0) {
      macro_sum += f1(tp[c], fp[c], fn[c]);
      ++present;
    }
  }
  scores.micro = f1(total_tp, total_fp, total_fn);
  scores.macro = present == 0 ? 0.0 : macro_sum / static_cast<double>(present);
  return scores;
}

ClassificationResult EvaluateClassification(const Tensor& embeddings, const NodeLabels& labels,
                                            const SplitSpec& split,
                                            const LogisticOptions& options) {
  if (labels.per_node.size() != embeddings.rows()) {
    throw Error(ErrorCode::kLengthMismatch, "embedding rows differ from label count");
  }
  std::vector<std::size_t> labeled;
  std::vector<int> strata;
  for (std::size_t i = 0; i < labels.per_node.size(); ++i) {
    if (labels.per_node[i].empty()) continue;
    labeled.push_back(i);
    strata.push_back(labels.per_node[i].front());
  }
  const Split positions = split.stratified
                              ? MakeStratifiedSplit(strata, split)
                              : MakeSplit(labeled.size(), split);
  std::vector<std::size_t> train;
  for (std::size_t p : positions.train) train.push_back(labeled[p]);

  const OvrClassifier model =
      TrainLogisticOvr(embeddings, labels.per_node, train, labels.num_classes(), options);

  Tensor test_features(positions.test.size(), embeddings.cols());
  std::vector<std::vector<int>> truth;
  for (std::size_t r = 0; r < positions.test.size(); ++r) {
    const std::size_t node = labeled[positions.test[r]];
    auto src = embeddings.row(node);
    std::copy(src.begin(), src.end(), test_features.row(r).begin());
    truth.push_back(labels.per_node[node]);
  }
  const Tensor proba = model.PredictProba(test_features);
  const auto predicted = labels.multi_label ? PredictMultiLabel(proba) : PredictSingleLabel(proba);
  return {MicroMacroF1(predicted, truth, labels.num_classes()), model.skipped_classes()};
}

std::vector<NodePair> SampleNegatives(const SparseAdjacency& view, std::size_t count,
                                      std::uint64_t seed) {
  const std::size_t n = view.n();
  const std::size_t all_pairs = n < 2 ? 0 : n * (n - 1) / 2;
  const std::size_t available = all_pairs - view.num_edges();
  if (available < count) {
    throw Error(ErrorCode::kInsufficientNodes,
                "requested " + std::to_string(count) + " negatives but only " +
                    std::to_string(available) + " non-edges exist");
  }
  std::mt19937_64 rng(seed);
  std::vector<NodePair> out;
  out.reserve(count);
  if (available < 4 * count) {
    std::vector<NodePair> pool;
    pool.reserve(available);
    for (std::uint32_t u = 0; u < n; ++u) {
      for (std::uint32_t v = u + 1; v < n; ++v) {
        if (!view.HasEdge(u, v)) pool.push_back({u, v});
      }
    }
    std::shuffle(pool.begin(), pool.end(), rng);
    out.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(count));
    return out;
  }
  std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(n - 1));
  std::unordered_set<std::uint64_t> seen;
  while (out.size() < count) {
    std::uint32_t u = pick(rng);
    std::uint32_t v = pick(rng);
    if (u == v) continue;
    if (u > v) std::swap(u, v);
    if (view.HasEdge(u, v)) continue;
    if (!seen.insert(static_cast<std::uint64_t>(u) * n + v).second) continue;
    out.push_back({u, v});
  }
  return out;
}

LinkPredTask MakeLinkTask(const MultiViewNetwork& net, std::size_t target_view,
                          std::uint64_t seed) {
  if (target_view >= net.num_views()) {
    throw Error(ErrorCode::kIndexOutOfRange, "target view out of range");
  }
  LinkPredTask task;
  task.target_view = target_view;
  const auto& view = net.views[target_view];
  for (auto [u, v] : view.UpperPairs()) task.positives.push_back({u, v});
  task.negatives = SampleNegatives(view, task.positives.size(), seed);
  return task;
}

double CosineSimilarity(std::span<const double> a, std::span<const double> b,
                        bool* zero_vector) {
  if (a.size() != b.size()) throw Error(ErrorCode::kShapeMismatch, "cosine: lengths differ");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) {
    if (zero_vector) *zero_vector = true;
    return 0.0;
  }
  if (zero_vector) *zero_vector = false;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

namespace {

void RequireBinaryAligned(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) {
    throw Error(ErrorCode::kLengthMismatch, "scores and labels differ in length");
  }
}

}  // namespace

double RocAuc(std::span<const double> scores, std::span<const int> labels) {
  RequireBinaryAligned(scores, labels);
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  // Average ranks over tie groups (1-based), then Mann-Whitney U.
  double positive_rank_sum = 0.0;
  std::size_t positives = 0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) {
      if (labels[order[k]] != 0) {
        positive_rank_sum += avg_rank;
        ++positives;
      }
    }
    i = j;
  }
  const std::size_t negatives = order.size() - positives;
  if (positives == 0 || negatives == 0) {
    throw Error(ErrorCode::kInsufficientNodes, "AUC needs both positive and negative items");
  }
  const double p = static_cast<double>(positives);
  const double u = positive_rank_sum - p * (p + 1.0) / 2.0;
  return u / (p * static_cast<double>(negatives));
}

double AveragePrecision(std::span<const double> scores, std::span<const int> labels) {
  RequireBinaryAligned(scores, labels);
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  const auto total_pos =
      static_cast<std::size_t>(std::count_if(labels.begin(), labels.end(), [](int l) { return l != 0; }));
  if (total_pos == 0) {
    throw Error(ErrorCode::kInsufficientNodes, "average precision needs a positive item");
  }
  double ap = 0.0;
  double prev_recall = 0.0;
  std::size_t tp = 0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) {
      if (labels[order[j]] != 0) ++tp;
      ++j;
    }
    const double recall = static_cast<double>(tp) / static_cast<double>(total_pos);
    const double precision = static_cast<double>(tp) / static_cast<double>(j);
    ap += (recall - prev_recall) * precision;
    prev_recall = recall;
    i = j;
  }
  return ap;
}

LinkMetrics LinkPredictPairs(const Tensor& embeddings, std::span<const NodePair> pairs,
                             std::span<const int> labels, const SplitSpec& split) {
  if (pairs.size() != labels.size()) {
    throw Error(ErrorCode::kLengthMismatch, "pairs and labels differ in length");
  }
  LinkMetrics metrics;
  Tensor features(pairs.size(), 1);
  std::vector<std::vector<int>> classes(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (pairs[i].u >= embeddings.rows() || pairs[i].v >= embeddings.rows()) {
      throw Error(ErrorCode::kIndexOutOfRange, "pair references a node without an embedding");
    }
    bool zero = false;
    features(i, 0) =
        CosineSimilarity(embeddings.row(pairs[i].u), embeddings.row(pairs[i].v), &zero);
    if (zero) ++metrics.zero_vector_pairs;
    if (labels[i] != 0) classes[i] = {0};
  }
  const Split s = split.stratified ? MakeStratifiedSplit(labels, split)
                                   : MakeSplit(pairs.size(), split);
  const OvrClassifier model = TrainLogisticOvr(features, classes, s.train, 1);
  Tensor test_features(s.test.size(), 1);
  std::vector<int> test_labels;
  for (std::size_t r = 0; r < s.test.size(); ++r) {
    test_features(r, 0) = features(s.test[r], 0);
    test_labels.push_back(labels[s.test[r]] != 0 ? 1 : 0);
  }
  const Tensor proba = model.PredictProba(test_features);
  std::vector<double> scores(proba.data().begin(), proba.data().end());
  metrics.roc_auc = RocAuc(scores, test_labels);
  metrics.average_precision = AveragePrecision(scores, test_labels);
  return metrics;
}

LinkMetrics LinkPredict(const Tensor& embeddings, const LinkPredTask& task,
                        const SplitSpec& split) {
  std::vector<NodePair> pairs = task.positives;
  pairs.insert(pairs.end(), task.negatives.begin(), task.negatives.end());
  std::vector<int> labels(task.positives.size(), 1);
  labels.resize(pairs.size(), 0);
  return LinkPredictPairs(embeddings, pairs, labels, split);
}

}  // namespace rgae
