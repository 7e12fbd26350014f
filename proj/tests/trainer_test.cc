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

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "rgae/error.h"
#include "rgae/synthgen.h"
#include "rgae/trainer.h"
#include "support/oracle.h"

namespace rgae {
namespace {

TEST(UpdateLambdaTest, EqualDiscrepanciesGiveUniformWeights) {
  for (double c : {1e-6, 0.3, 7.0, 1e4}) {
    const std::vector<double> b = {c, c, c};
    for (double x : UpdateLambda(b, 3.0)) EXPECT_NEAR(x, 1.0 / 3.0, 1e-15);
  }
}

TEST(UpdateLambdaTest, HandEvaluatedGammaTwo) {
  // (2*1)^-1 = 0.5 and (2*4)^-1 = 0.125, normalized.
  const std::vector<double> b = {1.0, 4.0};
  const auto lambda = UpdateLambda(b, 2.0);
  EXPECT_NEAR(lambda[0], 0.8, 1e-15);
  EXPECT_NEAR(lambda[1], 0.2, 1e-15);
}

TEST(UpdateLambdaTest, LargeGammaApproachesEqualWeights) {
  const std::vector<double> b = {1.0, 4.0};
  for (double x : UpdateLambda(b, 500.0)) EXPECT_LT(std::abs(x - 0.5), 1e-2);
}

TEST(UpdateLambdaTest, GammaNearOneConcentratesOnSmallestDiscrepancy) {
  const std::vector<double> b = {1.0, 4.0};
  const auto lambda = UpdateLambda(b, 1.01);
  EXPECT_GT(lambda[0], 0.99);
  const std::vector<double> b3 = {5.0, 0.5, 2.0};
  EXPECT_GT(UpdateLambda(b3, 1.01)[1], 0.99);
}

TEST(UpdateLambdaTest, StaysOnSimplex) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> log_b(-30.0, 30.0);
  for (double gamma : {0.05, 0.5, 1.01, 2.0, 5.0, 500.0}) {
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<double> b(4);
      for (double& x : b) x = std::exp(log_b(rng));
      if (trial == 0) b[2] = 0.0;
      const auto lambda = UpdateLambda(b, gamma);
      EXPECT_NEAR(std::accumulate(lambda.begin(), lambda.end(), 0.0), 1.0, 1e-12);
      for (double x : lambda) {
        EXPECT_GE(x, 0.0);
        EXPECT_TRUE(std::isfinite(x));
      }
    }
  }
}

TEST(UpdateLambdaTest, InvalidGamma) {
  const std::vector<double> b = {1.0, 2.0};
  for (double gamma : {1.0, 0.0, -1.0}) {
    try {
      UpdateLambda(b, gamma);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kInvalidGamma);
    }
  }
}

TEST(AdamTest, ZeroGradientLeavesParametersUnchanged) {
  Tensor w = oracle::RandomTensor(3, 2, 1);
  const Tensor before = w;
  Tensor* params[] = {&w};
  const Tensor grads[] = {Tensor(3, 2)};
  AdamState state;
  for (int i = 0; i < 5; ++i) AdamStep(params, grads, state, 0.1);
  EXPECT_EQ(w, before);
}

// Scalar Adam written out longhand.
struct ScalarAdam {
  double m = 0.0, v = 0.0;
  int t = 0;
  double Step(double x, double g, double lr) {
    ++t;
    m = 0.9 * m + 0.1 * g;
    v = 0.999 * v + 0.001 * g * g;
    const double m_hat = m / (1.0 - std::pow(0.9, t));
    const double v_hat = v / (1.0 - std::pow(0.999, t));
    return x - lr * m_hat / (std::sqrt(v_hat) + 1e-8);
  }
};

TEST(AdamTest, MatchesScalarReference) {
  Tensor w({{0.5, -1.0}});
  Tensor* params[] = {&w};
  AdamState state;
  ScalarAdam ref[2];
  double x[2] = {0.5, -1.0};
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g(0.0, 2.0);
  for (int step = 0; step < 20; ++step) {
    const Tensor grads[] = {Tensor({{g(rng), g(rng)}})};
    AdamStep(params, grads, state, 0.01);
    for (int k = 0; k < 2; ++k) {
      x[k] = ref[k].Step(x[k], grads[0](0, k), 0.01);
      EXPECT_NEAR(w(0, k), x[k], 1e-15) << "step " << step;
    }
  }
}

TEST(AdamTest, FirstStepMovesByLearningRate) {
  Tensor w({{1.0, 1.0}});
  Tensor* params[] = {&w};
  const Tensor grads[] = {Tensor({{3.0, -0.02}})};
  AdamState state;
  AdamStep(params, grads, state, 0.1);
  EXPECT_NEAR(w(0, 0), 0.9, 1e-8);
  EXPECT_NEAR(w(0, 1), 1.1, 1e-6);
}

TEST(AdamTest, ShapeMismatchIsRejected) {
  Tensor w(2, 2);
  Tensor* params[] = {&w};
  const Tensor grads[] = {Tensor(2, 3)};
  AdamState state;
  EXPECT_THROW(AdamStep(params, grads, state, 0.1), Error);
}

TrainConfig SmallConfig() {
  TrainConfig config;
  config.total_dim = 12;
  config.hidden_sizes = {8};
  config.max_epochs = 30;
  config.seed = 3;
  return config;
}

TEST(TrainTest, ZeroEpochsReturnsInitialEmbeddings) {
  const MultiViewNetwork net = oracle::RandomNetwork(10, 2, 0.3, 1);
  TrainConfig config = SmallConfig();
  config.max_epochs = 0;
  const TrainResult result = Train(net, config);
  EXPECT_TRUE(result.history.empty());
  const RgaeParams initial = RgaeParams::Initialize(10, 2, config.Layers(2), config.seed);
  EXPECT_EQ(result.params.shared_weights, initial.shared_weights);
  const auto views = PrepareViews(net);
  EXPECT_EQ(result.embeddings.final, ComputeEmbeddings(views, initial, config.gamma).final);
  EXPECT_EQ(result.embeddings.final.cols(), 12u);
}

TrainResult TrainReconstructionOnly(std::size_t n, const std::vector<WeightedEdge>& edges) {
  MultiViewNetwork net;
  net.n = n;
  net.views = {SparseAdjacency::FromUndirectedEdges(n, edges)};
  for (std::size_t i = 0; i < n; ++i) net.node_names.push_back(std::to_string(i));
  TrainConfig config;
  config.total_dim = 4;
  config.hidden_sizes = {4};
  config.alpha = 0.0;
  config.beta = 0.0;
  config.max_epochs = 50;
  config.tol = 0.0;
  config.seed = 1;
  return Train(net, config);
}

// With one edge plus the unit diagonal the 2-node target has no zeros, so
// the positive weight #zero/#nonzero is 0 and the loss is identically 0.
TEST(TrainTest, TwoNodeReconstructionLossIsFlat) {
  const TrainResult result = TrainReconstructionOnly(2, {{0, 1, 1.0}});
  ASSERT_EQ(result.history.size(), 50u);
  for (const auto& r : result.history) EXPECT_EQ(r.total, 0.0);
  EXPECT_EQ(result.params.lambda, std::vector<double>{1.0});
}

TEST(TrainTest, ReconstructionOnlyLossDecreasesOnPath) {
  const TrainResult result = TrainReconstructionOnly(3, {{0, 1, 1.0}, {1, 2, 1.0}});
  ASSERT_EQ(result.history.size(), 50u);
  EXPECT_LT(result.history.back().total, result.history.front().total);
  for (const auto& r : result.history) EXPECT_EQ(r.total, r.reconstruction);
}

TEST(TrainTest, HistoryIsFiniteAndLambdaOnSimplex) {
  const MultiViewNetwork net = oracle::RandomNetwork(12, 3, 0.3, 2);
  std::size_t callbacks = 0;
  const TrainResult result = Train(net, SmallConfig(), [&](const EpochRecord&) { ++callbacks; });
  EXPECT_LE(result.history.size(), 30u);
  EXPECT_EQ(callbacks, result.history.size());
  for (const auto& r : result.history) {
    EXPECT_TRUE(std::isfinite(r.total));
    EXPECT_TRUE(std::isfinite(r.reconstruction));
    EXPECT_NEAR(std::accumulate(r.lambda.begin(), r.lambda.end(), 0.0), 1.0, 1e-12);
    for (double l : r.lambda) EXPECT_GE(l, 0.0);
  }
}

TEST(TrainTest, NoToleranceRunsEveryEpoch) {
  const MultiViewNetwork net = oracle::RandomNetwork(10, 2, 0.3, 3);
  TrainConfig config = SmallConfig();
  config.tol = 0.0;
  config.patience = TrainConfig::kNoPatienceLimit;
  config.max_epochs = 17;
  const TrainResult result = Train(net, config);
  EXPECT_EQ(result.history.size(), 17u);
  EXPECT_FALSE(result.converged);
}

TEST(TrainTest, LooseToleranceConvergesAfterPatience) {
  const MultiViewNetwork net = oracle::RandomNetwork(10, 2, 0.3, 3);
  TrainConfig config = SmallConfig();
  config.tol = 10.0;
  config.patience = 4;
  const TrainResult result = Train(net, config);
  EXPECT_TRUE(result.converged);
  EXPECT_EQ(result.history.size(), 5u);
}

TEST(TrainTest, IdenticalRunsAreBitIdentical) {
  const MultiViewNetwork net = oracle::RandomNetwork(12, 2, 0.3, 4);
  const TrainResult a = Train(net, SmallConfig());
  const TrainResult b = Train(net, SmallConfig());
  EXPECT_EQ(a.params.shared_weights, b.params.shared_weights);
  EXPECT_EQ(a.params.private_weights, b.params.private_weights);
  EXPECT_EQ(a.params.lambda, b.params.lambda);
  EXPECT_EQ(a.embeddings.final, b.embeddings.final);
}

TEST(TrainTest, InvalidConfigIsRejected) {
  const MultiViewNetwork net = oracle::RandomNetwork(10, 2, 0.3, 5);
  auto code_for = [&](auto mutate) {
    TrainConfig config = SmallConfig();
    mutate(config);
    try {
      Train(net, config);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kParseError;
  };
  EXPECT_EQ(code_for([](TrainConfig& c) { c.gamma = 1.0; }), ErrorCode::kInvalidGamma);
  EXPECT_EQ(code_for([](TrainConfig& c) { c.alpha = -1.0; }), ErrorCode::kConfigError);
  EXPECT_EQ(code_for([](TrainConfig& c) { c.lr = 0.0; }), ErrorCode::kConfigError);
  EXPECT_EQ(code_for([](TrainConfig& c) { c.total_dim = 2; }), ErrorCode::kConfigError);
}

TEST(TrainTest, DivergenceReportsEpoch) {
  const MultiViewNetwork net = oracle::RandomNetwork(10, 2, 0.3, 6);
  TrainConfig config = SmallConfig();
  config.lr = 1e200;
  try {
    Train(net, config);
    FAIL() << "expected NumericalOverflow";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNumericalOverflow);
    EXPECT_NE(std::string(e.what()).find("epoch"), std::string::npos) << e.what();
  }
}

TEST(FormatEpochRecordTest, TabSeparatedFields) {
  EpochRecord r{3, 1.5, 0.25, 0.125, 2.0, {0.5, 0.5}};
  EXPECT_EQ(FormatEpochRecord(r), "3\t1.5\t0.25\t0.125\t2\t0.5,0.5");
}

// Leave-one-out nearest neighbour by cosine similarity on the final
// embeddings.
double OneNearestNeighbourAccuracy(const Tensor& y, const std::vector<int>& labels) {
  std::size_t correct = 0;
  for (std::size_t i = 0; i < y.rows(); ++i) {
    double best = -std::numeric_limits<double>::infinity();
    std::size_t arg = i;
    for (std::size_t j = 0; j < y.rows(); ++j) {
      if (j == i) continue;
      double dot = 0.0, ni = 0.0, nj = 0.0;
      for (std::size_t k = 0; k < y.cols(); ++k) {
        dot += y(i, k) * y(j, k);
        ni += y(i, k) * y(i, k);
        nj += y(j, k) * y(j, k);
      }
      const double sim = ni > 0.0 && nj > 0.0 ? dot / std::sqrt(ni * nj) : -1.0;
      if (sim > best) {
        best = sim;
        arg = j;
      }
    }
    correct += labels[arg] == labels[i];
  }
  return static_cast<double>(correct) / static_cast<double>(y.rows());
}

TEST(TrainTest, PlantedCommunitiesSeparate) {
  const SynthConfig synth;
  const MultiViewNetwork net = GenerateSynthetic(synth);
  TrainConfig config;
  config.total_dim = 32;
  config.hidden_sizes = {32, 16};
  double accuracy = 0.0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    config.seed = seed;
    const TrainResult result = Train(net, config);
    accuracy += OneNearestNeighbourAccuracy(result.embeddings.final, BlockLabels(synth)) / 5;
  }
  EXPECT_GT(accuracy, 0.9);
}

}  // namespace
}  // namespace rgae
