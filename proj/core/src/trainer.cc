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

#include "rgae/trainer.h"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "rgae/error.h"
#include "rgae/tape.h"

namespace rgae {

void TrainConfig::Validate(std::size_t num_views) const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::kConfigError, what); };
  if (!(alpha >= 0.0) || !(beta >= 0.0)) fail("alpha and beta must be >= 0");
  RequireValidGamma(gamma);
  if (!(lr > 0.0)) fail("learning rate must be > 0");
  if (lambda_update_every == 0) fail("lambda_update_every must be >= 1");
  if (!(tol >= 0.0)) fail("tol must be >= 0");
  BlockDim(total_dim, num_views);
  for (std::size_t h : hidden_sizes) {
    if (h == 0) fail("hidden layer sizes must be >= 1");
  }
}

LayerSpec TrainConfig::Layers(std::size_t num_views) const {
  LayerSpec spec{hidden_sizes};
  spec.sizes.push_back(BlockDim(total_dim, num_views));
  return spec;
}

LossWeights TrainConfig::Weights() const {
  return {alpha, beta, gamma, use_similarity, use_difference, consensus};
}

void AdamStep(std::span<Tensor* const> params, std::span<const Tensor> grads, AdamState& state,
              double lr) {
  if (params.size() != grads.size()) {
    throw Error(ErrorCode::kShapeMismatch, "adam: parameter and gradient counts differ");
  }
  if (state.first_moment.empty()) {
    for (const Tensor* p : params) {
      state.first_moment.emplace_back(p->rows(), p->cols());
      state.second_moment.emplace_back(p->rows(), p->cols());
    }
  }
  if (state.first_moment.size() != params.size()) {
    throw Error(ErrorCode::kShapeMismatch, "adam: state tracks a different parameter count");
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (!params[i]->SameShape(grads[i]) || !params[i]->SameShape(state.first_moment[i])) {
      throw Error(ErrorCode::kShapeMismatch,
                  "adam: shape mismatch for parameter " + std::to_string(i));
    }
  }

  ++state.step;
  const double t = static_cast<double>(state.step);
  const double correction1 = 1.0 - std::pow(state.beta1, t);
  const double correction2 = 1.0 - std::pow(state.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto p = params[i]->data();
    auto g = grads[i].data();
    auto m = state.first_moment[i].data();
    auto v = state.second_moment[i].data();
    for (std::size_t k = 0; k < p.size(); ++k) {
      m[k] = state.beta1 * m[k] + (1.0 - state.beta1) * g[k];
      v[k] = state.beta2 * v[k] + (1.0 - state.beta2) * g[k] * g[k];
      const double m_hat = m[k] / correction1;
      const double v_hat = v[k] / correction2;
      p[k] -= lr * m_hat / (std::sqrt(v_hat) + state.epsilon);
    }
  }
}

std::vector<double> UpdateLambda(std::span<const double> discrepancies, double gamma) {
  RequireValidGamma(gamma);
  if (discrepancies.empty()) throw Error(ErrorCode::kConfigError, "no views to weight");
  constexpr double kFloor = 1e-12;
  const double exponent = 1.0 / (1.0 - gamma);
  std::vector<double> log_w(discrepancies.size());
  for (std::size_t i = 0; i < discrepancies.size(); ++i) {
    const double b = std::max(discrepancies[i], kFloor);
    log_w[i] = exponent * (std::log(gamma) + std::log(b));
  }
  const double shift = *std::max_element(log_w.begin(), log_w.end());
  std::vector<double> lambda(log_w.size());
  double total = 0.0;
  for (std::size_t i = 0; i < log_w.size(); ++i) {
    lambda[i] = std::exp(log_w[i] - shift);
    total += lambda[i];
  }
  for (double& l : lambda) l /= total;
  return lambda;
}

std::vector<double> ViewDiscrepancies(const EmbeddingSet& embeddings) {
  std::vector<double> b;
  for (const Tensor& shared : embeddings.shared) {
    double acc = 0.0;
    auto s = shared.data();
    auto c = embeddings.consistent.data();
    for (std::size_t k = 0; k < s.size(); ++k) acc += (c[k] - s[k]) * (c[k] - s[k]);
    b.push_back(acc);
  }
  return b;
}

namespace {

std::string FormatDouble(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, end);
}

}  // namespace

std::string FormatEpochRecord(const EpochRecord& r) {
  std::string line = std::to_string(r.epoch) + '\t' + FormatDouble(r.reconstruction) + '\t' +
                     FormatDouble(r.similarity) + '\t' + FormatDouble(r.difference) + '\t' +
                     FormatDouble(r.total) + '\t';
  for (std::size_t i = 0; i < r.lambda.size(); ++i) {
    if (i > 0) line += ',';
    line += FormatDouble(r.lambda[i]);
  }
  return line;
}

TrainResult Train(const MultiViewNetwork& net, const TrainConfig& config,
                  const EpochCallback& on_epoch) {
  net.Validate();
  config.Validate(net.num_views());
  const auto views = PrepareViews(net);
  const LossWeights weights = config.Weights();

  TrainResult result;
  result.params = RgaeParams::Initialize(net.n, net.num_views(), config.Layers(net.num_views()),
                                         config.seed);
  AdamState adam;
  const auto weight_ptrs = result.params.WeightPointers();

  // One optimization step plus the lambda refresh.
  auto run_epoch = [&](std::size_t epoch) {
    EpochRecord record;
    record.epoch = epoch;
    std::vector<Tensor> grads;
    {
      Tape tape;
      const LossGraph g = RecordTotalLoss(tape, views, result.params, weights);
      tape.Backward(g.total);
      record.reconstruction = tape.value(g.reconstruction).item();
      record.similarity = tape.value(g.similarity).item();
      record.difference = tape.value(g.difference).item();
      record.total = tape.value(g.total).item();
      for (Var w : g.params.shared_weights) grads.push_back(tape.grad(w));
      for (const auto& stack : g.params.private_weights) {
        for (Var w : stack) grads.push_back(tape.grad(w));
      }
    }
    AdamStep(weight_ptrs, grads, adam, config.lr);
    for (const Tensor* w : weight_ptrs) {
      if (!w->AllFinite()) {
        throw Error(ErrorCode::kNumericalOverflow, "non-finite weights after update");
      }
    }
    if ((epoch + 1) % config.lambda_update_every == 0) {
      const EmbeddingSet current =
          ComputeEmbeddings(views, result.params, config.gamma, config.consensus);
      result.params.lambda = UpdateLambda(ViewDiscrepancies(current), config.gamma);
    }
    record.lambda = result.params.lambda;
    return record;
  };

  double previous_loss = 0.0;
  std::size_t calm_epochs = 0;
  for (std::size_t epoch = 0; epoch < config.max_epochs; ++epoch) {
    EpochRecord record;
    try {
      record = run_epoch(epoch);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kNumericalOverflow) throw;
      throw Error(ErrorCode::kNumericalOverflow,
                  "epoch " + std::to_string(epoch) + ": " + e.what());
    }
    if (on_epoch) on_epoch(record);
    result.history.push_back(record);

    if (epoch > 0) {
      const double scale = std::max(std::abs(previous_loss), 1e-300);
      const double change = std::abs(record.total - previous_loss) / scale;
      calm_epochs = change < config.tol ? calm_epochs + 1 : 0;
      if (calm_epochs >= config.patience) {
        result.converged = true;
        previous_loss = record.total;
        break;
      }
    }
    previous_loss = record.total;
  }

  result.embeddings = ComputeEmbeddings(views, result.params, config.gamma, config.consensus);
  return result;
}

}  // namespace rgae
