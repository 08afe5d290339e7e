// Copyright 2026 The RiskCast Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RISKCAST_TENSOR_H_
#define RISKCAST_TENSOR_H_

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace riskcast {

using Shape = std::vector<std::size_t>;

std::string ShapeString(const Shape& shape);

// Dense row-major array of doubles. Every dimension is at least 1; a tensor
// with a zero-length axis cannot be constructed. The default-constructed
// tensor is the scalar [1] holding 0.
class Tensor {
 public:
  Tensor();
  explicit Tensor(Shape shape);  // zero-filled
  Tensor(Shape shape, std::vector<double> data);

  static Tensor Full(Shape shape, double value);
  static Tensor Vector(std::initializer_list<double> values);
  static Tensor Vector(std::span<const double> values);
  static Tensor Matrix(std::initializer_list<std::initializer_list<double>> rows);
  static Tensor Identity(std::size_t n);

  const Shape& shape() const { return shape_; }
  std::size_t rank() const { return shape_.size(); }
  std::size_t dim(std::size_t axis) const { return shape_.at(axis); }
  std::size_t size() const { return data_.size(); }

  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }
  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  // Rank-2 element access.
  double& operator()(std::size_t r, std::size_t c) {
    return data_[r * shape_[1] + c];
  }
  double operator()(std::size_t r, std::size_t c) const {
    return data_[r * shape_[1] + c];
  }

  // Contiguous slice along the leading axis.
  std::span<double> row(std::size_t r);
  std::span<const double> row(std::size_t r) const;

  // Same data, new shape with an equal element count.
  Tensor Reshaped(Shape shape) const;

  void Fill(double value);
  bool AllFinite() const;

  friend bool operator==(const Tensor&, const Tensor&) = default;

 private:
  Shape shape_;
  std::vector<double> data_;
};

enum class ElementwiseOp { kAdd, kSub, kMul };
enum class ReduceOp { kSum, kMean, kMax };

// [m x k] * [k x n] -> [m x n]. Throws DimensionError naming both shapes.
Tensor MatMul(const Tensor& a, const Tensor& b);

Tensor Transpose(const Tensor& a);

Tensor Elementwise(ElementwiseOp op, const Tensor& a, const Tensor& b);
inline Tensor Add(const Tensor& a, const Tensor& b) {
  return Elementwise(ElementwiseOp::kAdd, a, b);
}
inline Tensor Sub(const Tensor& a, const Tensor& b) {
  return Elementwise(ElementwiseOp::kSub, a, b);
}
inline Tensor Mul(const Tensor& a, const Tensor& b) {
  return Elementwise(ElementwiseOp::kMul, a, b);
}

Tensor Scale(const Tensor& a, double factor);

// Left-to-right reduction over all elements.
double Reduce(ReduceOp op, const Tensor& a);

}  // namespace riskcast

#endif  // RISKCAST_TENSOR_H_
