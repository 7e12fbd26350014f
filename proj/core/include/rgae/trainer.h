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

#ifndef RGAE_TRAINER_H_
#define RGAE_TRAINER_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "rgae/graph.h"
#include "rgae/model.h"
#include "rgae/tensor.h"

namespace rgae {

struct TrainConfig {
  // Total embedding width D; each of the |V|+1 blocks gets floor(D/(|V|+1)).
  std::size_t total_dim = 128;
  // Hidden layer widths; the block width is appended as the last layer.
  std::vector<std::size_t> hidden_sizes = {800, 400};
  double alpha = 0.5;
  double beta = 0.5;
  double gamma = 5.0;
  double lr = 0.01;
  std::size_t max_epochs = 500;
  std::size_t patience = 20;
  double tol = 1e-5;
  std::uint64_t seed = 0;
  bool use_similarity = true;
  bool use_difference = true;
  std::size_t lambda_update_every = 1;
  ConsensusRule consensus = ConsensusRule::kLambda;

  static constexpr std::size_t kNoPatienceLimit = std::numeric_limits<std::size_t>::max();

  // Throws ConfigError (InvalidGamma for gamma) on invalid settings.
  void Validate(std::size_t num_views) const;
  LayerSpec Layers(std::size_t num_views) const;
  LossWeights Weights() const;
};

struct AdamState {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::size_t step = 0;
  std::vector<Tensor> first_moment;
  std::vector<Tensor> second_moment;
};

// One bias-corrected Adam update in place. Moment buffers are created on the
// first call; afterwards their shapes must match `params`.
void AdamStep(std::span<Tensor* const> params, std::span<const Tensor> grads, AdamState& state,
              double lr);

// lambda_i ∝ (gamma * B_i)^(1/(1-gamma)) with B_i floored at 1e-12, evaluated
// in log space. Throws InvalidGamma for gamma <= 0 or gamma == 1.
std::vector<double> UpdateLambda(std::span<const double> discrepancies, double gamma);

// B_i = ||consistent - shared_i||_F^2
std::vector<double> ViewDiscrepancies(const EmbeddingSet& embeddings);

struct EpochRecord {
  std::size_t epoch = 0;
  double reconstruction = 0.0;
  double similarity = 0.0;
  double difference = 0.0;
  double total = 0.0;
  // View weights in effect after this epoch's lambda update.
  std::vector<double> lambda;
};

// Tab-separated: epoch, L_rec, L_sim, L_dif, L_total, comma-joined lambda.
std::string FormatEpochRecord(const EpochRecord& record);

struct TrainResult {
  RgaeParams params;
  EmbeddingSet embeddings;
  std::vector<EpochRecord> history;
  bool converged = false;
};

using EpochCallback = std::function<void(const EpochRecord&)>;

// Full-batch joint optimization: per epoch forward all views, backward the
// total loss, take an Adam step, then refresh lambda. Stops after max_epochs
// or once the relative loss change stays below tol for `patience` epochs.
// A non-finite loss aborts with NumericalOverflow naming the epoch.
TrainResult Train(const MultiViewNetwork& net, const TrainConfig& config,
                  const EpochCallback& on_epoch = {});

}  // namespace rgae

#endif  // RGAE_TRAINER_H_
