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

#ifndef RGAE_SYNTHGEN_H_
#define RGAE_SYNTHGEN_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "rgae/graph.h"

namespace rgae {

struct SynthConfig {
  std::size_t n = 60;
  // Community sizes; must sum to n.
  std::vector<std::size_t> block_sizes = {20, 20, 20};
  std::size_t views = 2;
  // Backbone stochastic block model probabilities.
  double p_in = 0.3;
  double p_out = 0.02;
  // Unique edges per view, as a multiple of the backbone edge count.
  double unique_frac = 0.5;
  // When set, overrides unique_frac so the expected pairwise Jaccard between
  // two views is this value: unique_frac = (1/overlap - 1) / 2.
  std::optional<double> overlap;
  std::uint64_t seed = 7;

  void Validate() const;
  double EffectiveUniqueFrac() const;
};

// Every view is the shared backbone plus exactly round(unique_frac * |backbone|)
// view-specific edges. A unique edge (u, v) is accepted with probability p_in
// when a random view-specific relabeling maps the community of one endpoint
// onto the community of the other, p_out otherwise. Unique edges never
// duplicate backbone edges. Labels are the backbone community ids.
MultiViewNetwork GenerateSynthetic(const SynthConfig& config);

// Community id per node for the backbone partition.
std::vector<int> BlockLabels(const SynthConfig& config);

}  // namespace rgae

#endif  // RGAE_SYNTHGEN_H_
