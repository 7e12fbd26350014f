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

#include "rgae/synthgen.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <unordered_set>

#include "rgae/error.h"

namespace rgae {

void SynthConfig::Validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::kConfigError, what); };
  if (n < 2) fail("need at least two nodes");
  if (views == 0) fail("need at least one view");
  if (block_sizes.empty()) fail("need at least one community");
  if (std::accumulate(block_sizes.begin(), block_sizes.end(), std::size_t{0}) != n) {
    fail("community sizes must sum to n");
  }
  if (!(p_out >= 0.0 && p_out < p_in && p_in <= 1.0)) fail("need 0 <= p_out < p_in <= 1");
  if (!(unique_frac >= 0.0) || !std::isfinite(unique_frac)) fail("unique_frac must be >= 0");
  if (overlap && !(*overlap > 0.0 && *overlap <= 1.0)) fail("overlap must lie in (0, 1]");
}

double SynthConfig::EffectiveUniqueFrac() const {
  if (overlap) return (1.0 / *overlap - 1.0) / 2.0;
  return unique_frac;
}

std::vector<int> BlockLabels(const SynthConfig& config) {
  std::vector<int> labels;
  labels.reserve(config.n);
  for (std::size_t b = 0; b < config.block_sizes.size(); ++b) {
    labels.insert(labels.end(), config.block_sizes[b], static_cast<int>(b));
  }
  return labels;
}

namespace {

std::uint64_t PairKey(std::uint32_t u, std::uint32_t v, std::size_t n) {
  return static_cast<std::uint64_t>(u) * n + v;
}

}  // namespace

MultiViewNetwork GenerateSynthetic(const SynthConfig& config) {
  config.Validate();
  const std::size_t n = config.n;
  const std::vector<int> community = BlockLabels(config);

  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<WeightedEdge> backbone;
  std::unordered_set<std::uint64_t> backbone_keys;
  for (std::uint32_t u = 0; u < n; ++u) {
    for (std::uint32_t v = u + 1; v < n; ++v) {
      const double p = community[u] == community[v] ? config.p_in : config.p_out;
      if (unit(rng) < p) {
        backbone.push_back({u, v, 1.0});
        backbone_keys.insert(PairKey(u, v, n));
      }
    }
  }

  const double frac = config.EffectiveUniqueFrac();
  const auto unique_count =
      static_cast<std::size_t>(std::llround(frac * static_cast<double>(backbone.size())));
  const std::size_t free_pairs = n * (n - 1) / 2 - backbone.size();
  if (unique_count > free_pairs) {
    throw Error(ErrorCode::kConfigError,
                "unique_frac asks for " + std::to_string(unique_count) +
                    " unique edges but only " + std::to_string(free_pairs) +
                    " non-backbone pairs exist");
  }

  MultiViewNetwork net;
  net.n = n;
  for (std::size_t i = 0; i < n; ++i) net.node_names.push_back(std::to_string(i));

  std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(n - 1));
  for (std::size_t view = 0; view < config.views; ++view) {
    // View-specific relabeling of communities: unique edges join block b to
    // block relabel[b], so each view carries its own label-informative pattern.
    std::vector<int> relabel(config.block_sizes.size());
    std::iota(relabel.begin(), relabel.end(), 0);
    std::shuffle(relabel.begin(), relabel.end(), rng);
    auto linked = [&](std::uint32_t u, std::uint32_t v) {
      return relabel[community[u]] == community[v] || relabel[community[v]] == community[u];
    };

    std::vector<WeightedEdge> edges = backbone;
    std::unordered_set<std::uint64_t> taken;
    const std::size_t max_attempts = 1000 * unique_count + 1000000;
    std::size_t attempts = 0;
    while (taken.size() < unique_count) {
      if (++attempts > max_attempts) {
        throw Error(ErrorCode::kConfigError,
                    "could not place " + std::to_string(unique_count) +
                        " unique edges with the given block probabilities");
      }
      std::uint32_t u = pick(rng);
      std::uint32_t v = pick(rng);
      if (u == v) continue;
      if (u > v) std::swap(u, v);
      const std::uint64_t key = PairKey(u, v, n);
      if (backbone_keys.contains(key) || taken.contains(key)) continue;
      const double p = linked(u, v) ? config.p_in : config.p_out;
      if (!(unit(rng) < p)) continue;
      taken.insert(key);
      edges.push_back({u, v, 1.0});
    }
    net.views.push_back(SparseAdjacency::FromUndirectedEdges(n, edges));
  }

  NodeLabels labels;
  for (std::size_t b = 0; b < config.block_sizes.size(); ++b) {
    labels.class_names.push_back("c" + std::to_string(b));
  }
  for (int c : community) labels.per_node.push_back({c});
  net.labels = std::move(labels);
  net.Validate();
  return net;
}

}  // namespace rgae
