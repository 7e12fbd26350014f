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

#include "rgae/model.h"

#include <cmath>
#include <random>
#include <string>

#include "rgae/error.h"

namespace rgae {

void LayerSpec::Validate() const {
  if (sizes.empty()) throw Error(ErrorCode::kConfigError, "layer spec needs at least one layer");
  for (std::size_t s : sizes) {
    if (s == 0) throw Error(ErrorCode::kConfigError, "layer sizes must be >= 1");
  }
}

std::size_t BlockDim(std::size_t total_dim, std::size_t num_views) {
  const std::size_t d = total_dim / (num_views + 1);
  if (d == 0) {
    throw Error(ErrorCode::kConfigError,
                "dimension " + std::to_string(total_dim) + " too small for " +
                    std::to_string(num_views) + " views");
  }
  return d;
}

RgaeParams RgaeParams::Initialize(std::size_t n, std::size_t num_views, const LayerSpec& layers,
                                  std::uint64_t seed) {
  layers.Validate();
  if (num_views == 0) throw Error(ErrorCode::kConfigError, "need at least one view");
  std::mt19937_64 rng(seed);
  auto make_stack = [&] {
    std::vector<Tensor> stack;
    std::size_t fan_in = n;
    for (std::size_t fan_out : layers.sizes) {
      const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
      std::uniform_real_distribution<double> dist(-limit, limit);
      Tensor w(fan_in, fan_out);
      for (double& v : w.data()) v = dist(rng);
      stack.push_back(std::move(w));
      fan_in = fan_out;
    }
    return stack;
  };
  RgaeParams params;
  params.shared_weights = make_stack();
  for (std::size_t i = 0; i < num_views; ++i) params.private_weights.push_back(make_stack());
  params.lambda.assign(num_views, 1.0 / static_cast<double>(num_views));
  return params;
}

void RgaeParams::Validate(std::size_t n) const {
  auto check_stack = [&](const std::vector<Tensor>& stack, const std::string& name) {
    if (stack.size() != shared_weights.size()) {
      throw Error(ErrorCode::kShapeMismatch, name + " has a different layer count");
    }
    std::size_t rows = n;
    for (std::size_t l = 0; l < stack.size(); ++l) {
      if (stack[l].rows() != rows || stack[l].cols() != shared_weights[l].cols()) {
        throw Error(ErrorCode::kShapeMismatch,
                    name + " layer " + std::to_string(l) + " has shape " +
                        std::to_string(stack[l].rows()) + "x" + std::to_string(stack[l].cols()));
      }
      rows = stack[l].cols();
    }
  };
  if (shared_weights.empty()) throw Error(ErrorCode::kShapeMismatch, "no layers");
  check_stack(shared_weights, "shared stack");
  for (std::size_t i = 0; i < private_weights.size(); ++i) {
    check_stack(private_weights[i], "private stack " + std::to_string(i));
  }
  if (lambda.size() != private_weights.size()) {
    throw Error(ErrorCode::kShapeMismatch, "lambda length differs from view count");
  }
}

std::vector<Tensor*> RgaeParams::WeightPointers() {
  std::vector<Tensor*> out;
  for (auto& w : shared_weights) out.push_back(&w);
  for (auto& stack : private_weights) {
    for (auto& w : stack) out.push_back(&w);
  }
  return out;
}

ReconstructionTarget MakeReconstructionTarget(const SparseAdjacency& adj) {
  const std::size_t n = adj.n();
  auto target = std::make_shared<Tensor>(n, n);
  std::size_t nonzero = 0;
  for (std::size_t r = 0; r < n; ++r) {
    (*target)(r, r) = 1.0;
    ++nonzero;
    for (std::uint32_t c : adj.neighbors(r)) {
      (*target)(r, c) = 1.0;
      ++nonzero;
    }
  }
  const std::size_t zero = n * n - nonzero;
  return {std::move(target), static_cast<double>(zero) / static_cast<double>(nonzero)};
}

std::vector<PreparedView> PrepareViews(const MultiViewNetwork& net) {
  net.Validate();
  std::vector<PreparedView> views;
  views.reserve(net.num_views());
  for (const auto& adj : net.views) {
    views.push_back({Normalize(adj), MakeReconstructionTarget(adj)});
  }
  return views;
}

ParamVars RecordParams(Tape& tape, const RgaeParams& params, bool trainable) {
  auto record = [&](const Tensor& w) {
    return trainable ? tape.Parameter(w) : tape.Constant(w);
  };
  ParamVars vars;
  for (const auto& w : params.shared_weights) vars.shared_weights.push_back(record(w));
  for (const auto& stack : params.private_weights) {
    auto& out = vars.private_weights.emplace_back();
    for (const auto& w : stack) out.push_back(record(w));
  }
  return vars;
}

namespace {

// Layer 0 consumes identity features, so norm * I * W0 reduces to norm * W0.
Var Encode(Tape& tape, const NormalizedAdjacency& norm, std::span<const Var> stack) {
  Var y = tape.Relu(tape.Spmm(norm, stack[0]));
  for (std::size_t l = 1; l < stack.size(); ++l) {
    y = tape.Relu(tape.MatMul(tape.Spmm(norm, y), stack[l]));
  }
  return y;
}

}  // namespace

ViewOutputs ForwardView(Tape& tape, const NormalizedAdjacency& norm, const ParamVars& params,
                        std::size_t view) {
  if (view >= params.private_weights.size()) {
    throw Error(ErrorCode::kIndexOutOfRange, "view " + std::to_string(view) + " out of range");
  }
  if (tape.value(params.shared_weights[0]).rows() != norm.n()) {
    throw Error(ErrorCode::kShapeMismatch, "first-layer weights do not match node count");
  }
  ViewOutputs out;
  out.shared = Encode(tape, norm, params.shared_weights);
  out.priv = Encode(tape, norm, params.private_weights[view]);
  out.reconstruction = tape.Sigmoid(tape.Gram(tape.ConcatCols(out.shared, out.priv)));
  return out;
}

void RequireValidGamma(double gamma) {
  if (!(gamma > 0.0) || gamma == 1.0 || !std::isfinite(gamma)) {
    throw Error(ErrorCode::kInvalidGamma,
                "gamma must be positive and different from 1, got " + std::to_string(gamma));
  }
}

std::vector<double> ConsensusWeights(std::span<const double> lambda, double gamma,
                                     ConsensusRule rule) {
  RequireValidGamma(gamma);
  std::vector<double> w(lambda.size());
  double total = 0.0;
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    if (lambda[i] < 0.0) {
      throw Error(ErrorCode::kDegenerateWeights, "negative view weight");
    }
    w[i] = rule == ConsensusRule::kLambda ? lambda[i] : std::pow(lambda[i], gamma);
    total += w[i];
  }
  if (!(total > 0.0)) {
    throw Error(ErrorCode::kDegenerateWeights, "sum of lambda^gamma is zero");
  }
  for (double& v : w) v /= total;
  return w;
}

Var ConsistentEmbedding(Tape& tape, std::span<const Var> shared, std::span<const double> lambda,
                        double gamma, ConsensusRule rule) {
  if (shared.size() != lambda.size() || shared.empty()) {
    throw Error(ErrorCode::kShapeMismatch, "one lambda per shared output required");
  }
  const auto w = ConsensusWeights(lambda, gamma, rule);
  Var acc = tape.Scale(shared[0], w[0]);
  for (std::size_t i = 1; i < shared.size(); ++i) acc = tape.Add(acc, tape.Scale(shared[i], w[i]));
  return acc;
}

Tensor ConsistentEmbedding(std::span<const Tensor> shared, std::span<const double> lambda,
                           double gamma, ConsensusRule rule) {
  if (shared.size() != lambda.size() || shared.empty()) {
    throw Error(ErrorCode::kShapeMismatch, "one lambda per shared output required");
  }
  const auto w = ConsensusWeights(lambda, gamma, rule);
  Tensor out(shared[0].rows(), shared[0].cols());
  for (std::size_t i = 0; i < shared.size(); ++i) {
    if (!shared[i].SameShape(out)) {
      throw Error(ErrorCode::kShapeMismatch, "shared outputs differ in shape");
    }
    auto src = shared[i].data();
    auto dst = out.data();
    for (std::size_t k = 0; k < dst.size(); ++k) dst[k] += w[i] * src[k];
  }
  return out;
}

Var SimilarityLoss(Tape& tape, std::span<const Var> shared, Var consistent,
                   std::span<const double> lambda, double gamma) {
  RequireValidGamma(gamma);
  if (shared.size() != lambda.size() || shared.empty()) {
    throw Error(ErrorCode::kShapeMismatch, "one lambda per shared output required");
  }
  Var acc = tape.Scale(tape.SquaredFrobenius(tape.Sub(consistent, shared[0])),
                       std::pow(lambda[0], gamma));
  for (std::size_t i = 1; i < shared.size(); ++i) {
    acc = tape.Add(acc, tape.Scale(tape.SquaredFrobenius(tape.Sub(consistent, shared[i])),
                                   std::pow(lambda[i], gamma)));
  }
  return acc;
}

Var DifferenceLoss(Tape& tape, Var shared, Var priv) {
  return tape.SquaredFrobenius(tape.RowDot(shared, priv));
}

LossGraph RecordTotalLoss(Tape& tape, std::span<const PreparedView> views,
                          const RgaeParams& params, const LossWeights& weights) {
  if (weights.alpha < 0.0 || weights.beta < 0.0) {
    throw Error(ErrorCode::kConfigError, "alpha and beta must be non-negative");
  }
  if (views.size() != params.num_views()) {
    throw Error(ErrorCode::kShapeMismatch, "parameter view count differs from network");
  }
  params.Validate(views.front().norm.n());

  LossGraph g;
  g.params = RecordParams(tape, params, /*trainable=*/true);
  std::vector<Var> shared;
  for (std::size_t i = 0; i < views.size(); ++i) {
    g.views.push_back(ForwardView(tape, views[i].norm, g.params, i));
    shared.push_back(g.views.back().shared);
  }

  for (std::size_t i = 0; i < views.size(); ++i) {
    const auto& rec = views[i].reconstruction;
    Var term = tape.BalancedBce(g.views[i].reconstruction, rec.target, rec.positive_weight);
    Var dif = DifferenceLoss(tape, g.views[i].shared, g.views[i].priv);
    g.reconstruction = i == 0 ? term : tape.Add(g.reconstruction, term);
    g.difference = i == 0 ? dif : tape.Add(g.difference, dif);
  }
  g.consistent =
      ConsistentEmbedding(tape, shared, params.lambda, weights.gamma, weights.consensus);
  g.similarity = SimilarityLoss(tape, shared, g.consistent, params.lambda, weights.gamma);

  g.total = g.reconstruction;
  if (weights.use_similarity) {
    g.total = tape.Add(g.total, tape.Scale(g.similarity, weights.alpha));
  }
  if (weights.use_difference) {
    g.total = tape.Add(g.total, tape.Scale(g.difference, weights.beta));
  }
  return g;
}

Tensor Aggregate(const Tensor& consistent, std::span<const Tensor> priv) {
  std::size_t width = consistent.cols();
  for (const auto& p : priv) {
    if (p.rows() != consistent.rows()) {
      throw Error(ErrorCode::kShapeMismatch, "aggregate: row counts differ");
    }
    width += p.cols();
  }
  Tensor out(consistent.rows(), width);
  for (std::size_t r = 0; r < consistent.rows(); ++r) {
    auto dst = out.row(r).begin();
    auto src = consistent.row(r);
    dst = std::copy(src.begin(), src.end(), dst);
    for (const auto& p : priv) {
      auto s = p.row(r);
      dst = std::copy(s.begin(), s.end(), dst);
    }
  }
  return out;
}

EmbeddingSet ComputeEmbeddings(std::span<const PreparedView> views, const RgaeParams& params,
                               double gamma, ConsensusRule rule) {
  if (views.size() != params.num_views()) {
    throw Error(ErrorCode::kShapeMismatch, "parameter view count differs from network");
  }
  params.Validate(views.front().norm.n());
  Tape tape;
  const ParamVars vars = RecordParams(tape, params, /*trainable=*/false);
  EmbeddingSet out;
  for (std::size_t i = 0; i < views.size(); ++i) {
    // The decoder is not needed here; encode only.
    Var s = Encode(tape, views[i].norm, vars.shared_weights);
    Var p = Encode(tape, views[i].norm, vars.private_weights[i]);
    out.shared.push_back(tape.value(s));
    out.priv.push_back(tape.value(p));
  }
  out.consistent = ConsistentEmbedding(out.shared, params.lambda, gamma, rule);
  out.final = Aggregate(out.consistent, out.priv);
  return out;
}

}  // namespace rgae
