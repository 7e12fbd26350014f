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

#include <benchmark/benchmark.h>

#include <random>

#include "rgae/graph.h"
#include "rgae/model.h"
#include "rgae/synthgen.h"
#include "rgae/tape.h"
#include "rgae/trainer.h"

namespace {

using namespace rgae;

MultiViewNetwork Network(std::size_t n, std::size_t views) {
  SynthConfig config;
  config.n = n;
  config.block_sizes = {n / 2, n - n / 2};
  config.views = views;
  config.p_in = std::min(1.0, 12.0 / static_cast<double>(n));
  config.p_out = config.p_in / 10;
  return GenerateSynthetic(config);
}

Tensor Dense(std::size_t rows, std::size_t cols) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Tensor t(rows, cols);
  for (double& x : t.data()) x = u(rng);
  return t;
}

void BM_Normalize(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const MultiViewNetwork net = Network(n, 1);
  for (auto _ : state) benchmark::DoNotOptimize(Normalize(net.views[0]));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(net.views[0].nnz()));
}
BENCHMARK(BM_Normalize)->RangeMultiplier(4)->Range(64, 4096);

void BM_Spmm(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const NormalizedAdjacency norm = Normalize(Network(n, 1).views[0]);
  const Tensor x = Dense(n, 64);
  for (auto _ : state) benchmark::DoNotOptimize(Spmm(norm, x));
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(norm.col_indices().size() * 64));
}
BENCHMARK(BM_Spmm)->RangeMultiplier(4)->Range(64, 4096);

// Forward, backward and Adam step over the full loss.
void BM_TrainingEpoch(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const MultiViewNetwork net = Network(n, 2);
  const auto views = PrepareViews(net);
  RgaeParams params = RgaeParams::Initialize(n, 2, {{32, 16, 10}}, 3);
  const auto ptrs = params.WeightPointers();
  AdamState adam;
  for (auto _ : state) {
    Tape tape;
    const LossGraph g = RecordTotalLoss(tape, views, params, {});
    tape.Backward(g.total);
    std::vector<Tensor> grads;
    for (Var w : g.params.shared_weights) grads.push_back(tape.grad(w));
    for (const auto& stack : g.params.private_weights) {
      for (Var w : stack) grads.push_back(tape.grad(w));
    }
    AdamStep(ptrs, grads, adam, 1e-4);
  }
}
BENCHMARK(BM_TrainingEpoch)->Arg(60)->Arg(250)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_UpdateLambda(benchmark::State& state) {
  std::vector<double> b(static_cast<std::size_t>(state.range(0)));
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.1, 10.0);
  for (double& x : b) x = u(rng);
  for (auto _ : state) benchmark::DoNotOptimize(UpdateLambda(b, 5.0));
}
BENCHMARK(BM_UpdateLambda)->Arg(2)->Arg(4)->Arg(16);

}  // namespace

BENCHMARK_MAIN();
