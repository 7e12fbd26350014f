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

#ifndef RGAE_TAPE_H_
#define RGAE_TAPE_H_

#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

#include "rgae/graph.h"
#include "rgae/tensor.h"

namespace rgae {

// Handle to a node recorded on a Tape.
class Var {
 public:
  Var() = default;
  std::size_t id() const { return id_; }

 private:
  friend class Tape;
  explicit Var(std::size_t id) : id_(id) {}
  std::size_t id_ = static_cast<std::size_t>(-1);
};

// Clamp applied to probabilities before taking logs in BalancedBce.
inline constexpr double kProbabilityClamp = 1e-12;

// Append-only reverse-mode computation graph over dense matrices.
//
// Every op evaluates eagerly, records its value and a backward rule, and
// throws NumericalOverflow if the value contains NaN or Inf. Backward()
// walks nodes in strict reverse insertion order, so gradient accumulation
// order is fixed and replays are bit-identical. One tape belongs to one
// thread; sparse operands passed to Spmm must outlive Backward().
class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var Parameter(Tensor value);
  Var Constant(Tensor value);

  Var MatMul(Var a, Var b);
  // norm * b; norm is a constant, gradient flows into b only.
  Var Spmm(const NormalizedAdjacency& norm, Var b);
  // Subgradient at exactly 0 is 0.
  Var Relu(Var a);
  Var Sigmoid(Var a);
  Var ConcatCols(Var a, Var b);
  // a * a^T
  Var Gram(Var a);
  // Column vector of row-wise inner products.
  Var RowDot(Var a, Var b);
  Var SquaredFrobenius(Var a);
  Var Sum(Var a);
  Var Add(Var a, Var b);
  Var Sub(Var a, Var b);
  Var Scale(Var a, double c);
  // Sum over all entries of -w*t*log(p) - (1-t)*log(1-p), p clamped to
  // [kProbabilityClamp, 1 - kProbabilityClamp]. `target` must be binary and
  // shaped like `probs`. The clamp is treated as identity in the backward pass.
  Var BalancedBce(Var probs, std::shared_ptr<const Tensor> target, double positive_weight);

  const Tensor& value(Var v) const { return nodes_[v.id()].value; }
  // Gradient from the last Backward(); zeros for nodes it did not reach.
  Tensor grad(Var v) const;

  // Throws NonScalarRoot unless root is 1x1.
  void Backward(Var root);

  std::size_t size() const { return nodes_.size(); }

 private:
  using BackwardFn = std::function<void(Tape&, const Tensor& upstream)>;

  struct Node {
    Tensor value;
    Tensor grad;
    bool requires_grad = false;
    bool has_grad = false;
    BackwardFn backward;
  };

  Var Record(Tensor value, std::initializer_list<Var> operands, BackwardFn backward);
  void Accumulate(Var v, const Tensor& g);
  void Accumulate(Var v, Tensor&& g);
  bool RequiresGrad(Var v) const { return nodes_[v.id()].requires_grad; }

  std::vector<Node> nodes_;
};

}  // namespace rgae

#endif  // RGAE_TAPE_H_
