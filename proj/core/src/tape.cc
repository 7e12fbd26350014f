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

#include "rgae/tape.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "rgae/error.h"

namespace rgae {
namespace {

void RequireSameShape(const Tensor& a, const Tensor& b, const char* op) {
  if (!a.SameShape(b)) {
    throw Error(ErrorCode::kShapeMismatch,
                std::string(op) + ": shapes " + std::to_string(a.rows()) + "x" +
                    std::to_string(a.cols()) + " and " + std::to_string(b.rows()) + "x" +
                    std::to_string(b.cols()) + " differ");
  }
}

double Sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

Var Tape::Record(Tensor value, std::initializer_list<Var> operands, BackwardFn backward) {
  if (!value.AllFinite()) {
    throw Error(ErrorCode::kNumericalOverflow,
                "non-finite value produced at tape node " + std::to_string(nodes_.size()));
  }
  Node node;
  node.value = std::move(value);
  node.requires_grad = std::any_of(operands.begin(), operands.end(),
                                   [this](Var v) { return RequiresGrad(v); });
  if (node.requires_grad) node.backward = std::move(backward);
  nodes_.push_back(std::move(node));
  return Var(nodes_.size() - 1);
}

Var Tape::Parameter(Tensor value) {
  if (!value.AllFinite()) {
    throw Error(ErrorCode::kNumericalOverflow, "non-finite parameter value");
  }
  Node node;
  node.value = std::move(value);
  node.requires_grad = true;
  nodes_.push_back(std::move(node));
  return Var(nodes_.size() - 1);
}

Var Tape::Constant(Tensor value) {
  if (!value.AllFinite()) {
    throw Error(ErrorCode::kNumericalOverflow, "non-finite constant value");
  }
  Node node;
  node.value = std::move(value);
  nodes_.push_back(std::move(node));
  return Var(nodes_.size() - 1);
}

void Tape::Accumulate(Var v, const Tensor& g) {
  Node& node = nodes_[v.id()];
  if (!node.requires_grad) return;
  if (!node.has_grad) {
    node.grad = g;
    node.has_grad = true;
    return;
  }
  auto dst = node.grad.data();
  auto src = g.data();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
}

void Tape::Accumulate(Var v, Tensor&& g) {
  Node& node = nodes_[v.id()];
  if (!node.requires_grad) return;
  if (!node.has_grad) {
    node.grad = std::move(g);
    node.has_grad = true;
    return;
  }
  Accumulate(v, static_cast<const Tensor&>(g));
}

Tensor Tape::grad(Var v) const {
  const Node& node = nodes_[v.id()];
  if (node.has_grad) return node.grad;
  return Tensor(node.value.rows(), node.value.cols());
}

void Tape::Backward(Var root) {
  if (!nodes_[root.id()].value.is_scalar()) {
    throw Error(ErrorCode::kNonScalarRoot, "backward root must be a 1x1 tensor");
  }
  for (Node& node : nodes_) {
    node.grad = Tensor();
    node.has_grad = false;
  }
  if (!nodes_[root.id()].requires_grad) return;
  nodes_[root.id()].grad = Tensor::Scalar(1.0);
  nodes_[root.id()].has_grad = true;
  for (std::size_t i = root.id() + 1; i-- > 0;) {
    Node& node = nodes_[i];
    if (!node.has_grad || !node.backward) continue;
    // Copy: the closure may append to operand grads but never to this node.
    const Tensor upstream = node.grad;
    node.backward(*this, upstream);
  }
}

Var Tape::MatMul(Var a, Var b) {
  return Record(rgae::MatMul(value(a), value(b)), {a, b},
                [a, b](Tape& t, const Tensor& g) {
                  if (t.RequiresGrad(a)) t.Accumulate(a, MatMulTransB(g, t.value(b)));
                  if (t.RequiresGrad(b)) t.Accumulate(b, MatMulTransA(t.value(a), g));
                });
}

Var Tape::Spmm(const NormalizedAdjacency& norm, Var b) {
  const NormalizedAdjacency* adj = &norm;
  // The normalized adjacency is symmetric, so its transpose is itself.
  return Record(rgae::Spmm(norm, value(b)), {b},
                [adj, b](Tape& t, const Tensor& g) { t.Accumulate(b, rgae::Spmm(*adj, g)); });
}

Var Tape::Relu(Var a) {
  Tensor out = value(a);
  for (double& v : out.data()) v = v > 0.0 ? v : 0.0;
  return Record(std::move(out), {a}, [a](Tape& t, const Tensor& g) {
    Tensor da = g;
    auto in = t.value(a).data();
    auto d = da.data();
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (!(in[i] > 0.0)) d[i] = 0.0;
    }
    t.Accumulate(a, std::move(da));
  });
}

Var Tape::Sigmoid(Var a) {
  Tensor out = value(a);
  for (double& v : out.data()) v = rgae::Sigmoid(v);
  const std::size_t self = nodes_.size();
  return Record(std::move(out), {a}, [a, self](Tape& t, const Tensor& g) {
    Tensor da = g;
    auto y = t.nodes_[self].value.data();
    auto d = da.data();
    for (std::size_t i = 0; i < d.size(); ++i) d[i] *= y[i] * (1.0 - y[i]);
    t.Accumulate(a, std::move(da));
  });
}

Var Tape::ConcatCols(Var a, Var b) {
  const Tensor& va = value(a);
  const Tensor& vb = value(b);
  if (va.rows() != vb.rows()) {
    throw Error(ErrorCode::kShapeMismatch, "concat_cols: row counts differ");
  }
  const std::size_t ca = va.cols();
  const std::size_t cb = vb.cols();
  Tensor out(va.rows(), ca + cb);
  for (std::size_t r = 0; r < va.rows(); ++r) {
    std::copy(va.row(r).begin(), va.row(r).end(), out.row(r).begin());
    std::copy(vb.row(r).begin(), vb.row(r).end(), out.row(r).begin() + ca);
  }
  return Record(std::move(out), {a, b}, [a, b, ca, cb](Tape& t, const Tensor& g) {
    Tensor da(g.rows(), ca);
    Tensor db(g.rows(), cb);
    for (std::size_t r = 0; r < g.rows(); ++r) {
      auto src = g.row(r);
      std::copy(src.begin(), src.begin() + ca, da.row(r).begin());
      std::copy(src.begin() + ca, src.end(), db.row(r).begin());
    }
    t.Accumulate(a, std::move(da));
    t.Accumulate(b, std::move(db));
  });
}

Var Tape::Gram(Var a) {
  const Tensor& va = value(a);
  return Record(MatMulTransB(va, va), {a}, [a](Tape& t, const Tensor& g) {
    Tensor sym(g.rows(), g.cols());
    for (std::size_t i = 0; i < g.rows(); ++i) {
      for (std::size_t j = 0; j < g.cols(); ++j) sym(i, j) = g(i, j) + g(j, i);
    }
    t.Accumulate(a, rgae::MatMul(sym, t.value(a)));
  });
}

Var Tape::RowDot(Var a, Var b) {
  const Tensor& va = value(a);
  const Tensor& vb = value(b);
  RequireSameShape(va, vb, "row_dot");
  Tensor out(va.rows(), 1);
  for (std::size_t r = 0; r < va.rows(); ++r) {
    auto ra = va.row(r);
    auto rb = vb.row(r);
    double acc = 0.0;
    for (std::size_t j = 0; j < ra.size(); ++j) acc += ra[j] * rb[j];
    out(r, 0) = acc;
  }
  return Record(std::move(out), {a, b}, [a, b](Tape& t, const Tensor& g) {
    const Tensor& va = t.value(a);
    const Tensor& vb = t.value(b);
    if (t.RequiresGrad(a)) {
      Tensor da(va.rows(), va.cols());
      for (std::size_t r = 0; r < va.rows(); ++r) {
        for (std::size_t j = 0; j < va.cols(); ++j) da(r, j) = g(r, 0) * vb(r, j);
      }
      t.Accumulate(a, std::move(da));
    }
    if (t.RequiresGrad(b)) {
      Tensor db(vb.rows(), vb.cols());
      for (std::size_t r = 0; r < vb.rows(); ++r) {
        for (std::size_t j = 0; j < vb.cols(); ++j) db(r, j) = g(r, 0) * va(r, j);
      }
      t.Accumulate(b, std::move(db));
    }
  });
}

Var Tape::SquaredFrobenius(Var a) {
  return Record(Tensor::Scalar(rgae::SquaredFrobenius(value(a))), {a},
                [a](Tape& t, const Tensor& g) {
                  Tensor da = t.value(a);
                  const double scale = 2.0 * g.item();
                  for (double& v : da.data()) v *= scale;
                  t.Accumulate(a, std::move(da));
                });
}

Var Tape::Sum(Var a) {
  double acc = 0.0;
  for (double v : value(a).data()) acc += v;
  return Record(Tensor::Scalar(acc), {a}, [a](Tape& t, const Tensor& g) {
    const Tensor& va = t.value(a);
    t.Accumulate(a, Tensor(va.rows(), va.cols(), g.item()));
  });
}

Var Tape::Add(Var a, Var b) {
  RequireSameShape(value(a), value(b), "add");
  Tensor out = value(a);
  auto rhs = value(b).data();
  auto d = out.data();
  for (std::size_t i = 0; i < d.size(); ++i) d[i] += rhs[i];
  return Record(std::move(out), {a, b}, [a, b](Tape& t, const Tensor& g) {
    t.Accumulate(a, g);
    t.Accumulate(b, g);
  });
}

Var Tape::Sub(Var a, Var b) {
  RequireSameShape(value(a), value(b), "sub");
  Tensor out = value(a);
  auto rhs = value(b).data();
  auto d = out.data();
  for (std::size_t i = 0; i < d.size(); ++i) d[i] -= rhs[i];
  return Record(std::move(out), {a, b}, [a, b](Tape& t, const Tensor& g) {
    t.Accumulate(a, g);
    if (t.RequiresGrad(b)) {
      Tensor neg = g;
      for (double& v : neg.data()) v = -v;
      t.Accumulate(b, std::move(neg));
    }
  });
}

Var Tape::Scale(Var a, double c) {
  Tensor out = value(a);
  for (double& v : out.data()) v *= c;
  return Record(std::move(out), {a}, [a, c](Tape& t, const Tensor& g) {
    Tensor da = g;
    for (double& v : da.data()) v *= c;
    t.Accumulate(a, std::move(da));
  });
}

Var Tape::BalancedBce(Var probs, std::shared_ptr<const Tensor> target, double positive_weight) {
  const Tensor& p = value(probs);
  RequireSameShape(p, *target, "balanced_bce");
  constexpr double lo = kProbabilityClamp;
  constexpr double hi = 1.0 - kProbabilityClamp;
  auto pv = p.data();
  auto tv = target->data();
  double loss = 0.0;
  for (std::size_t i = 0; i < pv.size(); ++i) {
    const double q = std::clamp(pv[i], lo, hi);
    loss += tv[i] > 0.0 ? -positive_weight * std::log(q) : -std::log(1.0 - q);
  }
  return Record(Tensor::Scalar(loss), {probs},
                [probs, target, positive_weight](Tape& t, const Tensor& g) {
                  const Tensor& p = t.value(probs);
                  Tensor dp(p.rows(), p.cols());
                  auto pv = p.data();
                  auto tv = target->data();
                  auto d = dp.data();
                  const double up = g.item();
                  for (std::size_t i = 0; i < d.size(); ++i) {
                    const double q =
                        std::clamp(pv[i], kProbabilityClamp, 1.0 - kProbabilityClamp);
                    d[i] = up * (tv[i] > 0.0 ? -positive_weight / q : 1.0 / (1.0 - q));
                  }
                  t.Accumulate(probs, std::move(dp));
                });
}

}  // namespace rgae
