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

// Straight-line dense reference implementations used as test oracles. They
// share no code with the library beyond the Tensor container and are written
// for clarity over speed.

#ifndef RGAE_TESTS_SUPPORT_ORACLE_H_
#define RGAE_TESTS_SUPPORT_ORACLE_H_

#include <cstdint>
#include <ostream>
#include <vector>

#include "rgae/graph.h"
#include "rgae/model.h"
#include "rgae/tensor.h"

namespace rgae {

// Readable gtest failure output for tensors.
void PrintTo(const Tensor& t, std::ostream* os);

}  // namespace rgae

namespace rgae::oracle {

// Symmetric random graph on n nodes with edge probability p; every node gets
// at least one edge so views are never empty.
SparseAdjacency RandomGraph(std::size_t n, double p, std::uint64_t seed);
MultiViewNetwork RandomNetwork(std::size_t n, std::size_t views, double p, std::uint64_t seed);
Tensor RandomTensor(std::size_t rows, std::size_t cols, std::uint64_t seed, double scale = 1.0);

Tensor Dense(const SparseAdjacency& adj);
// (A + I) scaled by the inverse square roots of its row sums on both sides.
Tensor NormalizeDense(const Tensor& a);
Tensor Multiply(const Tensor& a, const Tensor& b);

struct ViewForward {
  Tensor shared;
  Tensor priv;
  Tensor reconstruction;
};
ViewForward Forward(const Tensor& norm, const RgaeParams& params, std::size_t view);

// Weighted log-loss over all N^2 entries with a unit-diagonal binary target.
double ReconstructionLoss(const Tensor& probs, const Tensor& adjacency);
double DifferenceLoss(const Tensor& shared, const Tensor& priv);
// Y_con = sum lambda_i Y_is (lambda-weighted rule).
Tensor Consensus(const std::vector<Tensor>& shared, const std::vector<double>& lambda);
double SimilarityLoss(const std::vector<Tensor>& shared, const Tensor& consistent,
                      const std::vector<double>& lambda, double gamma);

struct LossTerms {
  double reconstruction = 0.0;
  double similarity = 0.0;
  double difference = 0.0;
  double total = 0.0;
};
LossTerms TotalLoss(const MultiViewNetwork& net, const RgaeParams& params, double alpha,
                    double beta, double gamma);

// Max over entries of |a - b|; infinity on shape mismatch.
double MaxAbsDiff(const Tensor& a, const Tensor& b);
// |a - b| / max(|a|, |b|, floor)
double RelativeError(double a, double b, double floor);

}  // namespace rgae::oracle

#endif  // RGAE_TESTS_SUPPORT_ORACLE_H_
