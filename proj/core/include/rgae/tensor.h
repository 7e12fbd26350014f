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

#ifndef RGAE_TENSOR_H_
#define RGAE_TENSOR_H_

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace rgae {

// Dense row-major matrix of doubles.
class Tensor {
 public:
  Tensor() = default;
  Tensor(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Tensor(std::size_t rows, std::size_t cols, std::vector<double> data);
  // Row-list literal, e.g. Tensor({{1, 2}, {3, 4}}). Rows must be equal length.
  Tensor(std::initializer_list<std::initializer_list<double>> rows);

  static Tensor Zeros(std::size_t rows, std::size_t cols) { return {rows, cols}; }
  static Tensor Scalar(double v) { return {1, 1, v}; }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool is_scalar() const { return rows_ == 1 && cols_ == 1; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  // Scalar value of a 1x1 tensor.
  double item() const;

  bool AllFinite() const;
  bool SameShape(const Tensor& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  friend bool operator==(const Tensor&, const Tensor&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Plain (tape-free) dense kernels shared by the tape and the model.
Tensor MatMul(const Tensor& a, const Tensor& b);
// a^T * b
Tensor MatMulTransA(const Tensor& a, const Tensor& b);
// a * b^T
Tensor MatMulTransB(const Tensor& a, const Tensor& b);
Tensor Transpose(const Tensor& a);
double SquaredFrobenius(const Tensor& a);

}  // namespace rgae

#endif  // RGAE_TENSOR_H_
