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

#ifndef RGAE_MODEL_H_
#define RGAE_MODEL_H_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "rgae/graph.h"
#include "rgae/tape.h"
#include "rgae/tensor.h"

namespace rgae {

// Output width of each encoder layer; the last entry is the per-block
// embedding width d.
struct LayerSpec {
  std::vector<std::size_t> sizes;

  std::size_t embedding_dim() const { return sizes.back(); }
  void Validate() const;
};

// d = floor(total_dim / (num_views + 1)). Throws ConfigError when d < 1.
std::size_t BlockDim(std::size_t total_dim, std::size_t num_views);

struct RgaeParams {
  // private_weights[view][layer]; layer 0 has N rows (identity features).
  std::vector<std::vector<Tensor>> private_weights;
  // Tied across views, one matrix per layer.
  std::vector<Tensor> shared_weights;
  // View weights on the probability simplex.
  std::vector<double> lambda;

  std::size_t num_views() const { return private_weights.size(); }
  std::size_t num_layers() const { return shared_weights.size(); }

  // Glorot-uniform weights, uniform lambda.
  static RgaeParams Initialize(std::size_t n, std::size_t num_views, const LayerSpec& layers,
                               std::uint64_t seed);

  // Throws ShapeMismatch if the stacks are inconsistent with each other or n.
  void Validate(std::size_t n) const;

  // Every weight matrix in a fixed order: shared stack, then each private stack.
  std::vector<Tensor*> WeightPointers();
};

struct EmbeddingSet {
  std::vector<Tensor> shared;
  std::vector<Tensor> priv;
  Tensor consistent;
  Tensor final;
};

// Binary N x N reconstruction target (unit diagonal) with
// positive_weight = #zero / #nonzero over all N^2 entries.
struct ReconstructionTarget {
  std::shared_ptr<const Tensor> target;
  double positive_weight = 1.0;
};
ReconstructionTarget MakeReconstructionTarget(const SparseAdjacency& adj);

// Per-view inputs derived once from the network.
struct PreparedView {
  NormalizedAdjacency norm;
  ReconstructionTarget reconstruction;
};
std::vector<PreparedView> PrepareViews(const MultiViewNetwork& net);

struct ParamVars {
  std::vector<std::vector<Var>> private_weights;
  std::vector<Var> shared_weights;
};
// Records weights as parameters (trainable) or constants.
ParamVars RecordParams(Tape& tape, const RgaeParams& params, bool trainable);

struct ViewOutputs {
  Var shared;
  Var priv;
  Var reconstruction;
};

// Both encoder stacks for one view, then sigmoid((Ys ⊕ Yp)(Ys ⊕ Yp)^T).
ViewOutputs ForwardView(Tape& tape, const NormalizedAdjacency& norm, const ParamVars& params,
                        std::size_t view);

// Throws InvalidGamma unless gamma > 0 and gamma != 1.
void RequireValidGamma(double gamma);

// How Y_con combines the shared outputs.
enum class ConsensusRule {
  // Y_con = sum_i lambda_i * Y_is.
  kLambda,
  // Y_con = sum_i lambda_i^gamma * Y_is / sum_i lambda_i^gamma, the exact
  // minimizer of the similarity loss for fixed lambda. Alternating this with
  // the lambda update drives lambda to a vertex of the simplex for any
  // gamma > 1, so it is not the default.
  kLambdaPowGamma,
};

// Normalized combination weights for the given rule. Throws
// DegenerateWeights if they sum to zero or lambda has a negative entry.
std::vector<double> ConsensusWeights(std::span<const double> lambda, double gamma,
                                     ConsensusRule rule = ConsensusRule::kLambda);
Var ConsistentEmbedding(Tape& tape, std::span<const Var> shared, std::span<const double> lambda,
                        double gamma, ConsensusRule rule = ConsensusRule::kLambda);
Tensor ConsistentEmbedding(std::span<const Tensor> shared, std::span<const double> lambda,
                           double gamma, ConsensusRule rule = ConsensusRule::kLambda);

// sum_i lambda_i^gamma * ||consistent - shared_i||_F^2, lambda held constant.
Var SimilarityLoss(Tape& tape, std::span<const Var> shared, Var consistent,
                   std::span<const double> lambda, double gamma);
// ||row_dot(shared, priv)||^2
Var DifferenceLoss(Tape& tape, Var shared, Var priv);

struct LossWeights {
  double alpha = 0.5;
  double beta = 0.5;
  double gamma = 5.0;
  bool use_similarity = true;
  bool use_difference = true;
  ConsensusRule consensus = ConsensusRule::kLambda;
};

struct LossGraph {
  ParamVars params;
  std::vector<ViewOutputs> views;
  Var consistent;
  Var reconstruction;  // sum over views
  Var similarity;      // always recorded, excluded from total when ablated
  Var difference;      // sum over views
  Var total;
};

LossGraph RecordTotalLoss(Tape& tape, std::span<const PreparedView> views,
                          const RgaeParams& params, const LossWeights& weights);

// consistent ⊕ priv[0] ⊕ ... ⊕ priv[V-1]
Tensor Aggregate(const Tensor& consistent, std::span<const Tensor> priv);

// Forward pass without gradients; fills every field of EmbeddingSet.
EmbeddingSet ComputeEmbeddings(std::span<const PreparedView> views, const RgaeParams& params,
                               double gamma, ConsensusRule rule = ConsensusRule::kLambda);

}  // namespace rgae

#endif  // RGAE_MODEL_H_
