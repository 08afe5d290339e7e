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

#include "riskcast/tensor.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

#include "riskcast/error.h"

namespace riskcast {
namespace {

std::size_t CheckedCount(const Shape& shape) {
  if (shape.empty()) throw DimensionError("tensor shape must have rank >= 1");
  std::size_t count = 1;
  for (std::size_t d : shape) {
    if (d == 0) {
      throw DimensionError("zero-length axis in shape " + ShapeString(shape));
    }
    count *= d;
  }
  return count;
}

void RequireRank2(const Tensor& t, const char* what) {
  if (t.rank() != 2) {
    throw DimensionError(std::string(what) + " expects a matrix, got " +
                         ShapeString(t.shape()));
  }
}

}  // namespace

std::string ShapeString(const Shape& shape) {
  std::ostringstream out;
  out << "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) out << "x";
    out << shape[i];
  }
  out << "]";
  return out.str();
}

Tensor::Tensor() : shape_{1}, data_(1, 0.0) {}

Tensor::Tensor(Shape shape) : shape_(std::move(shape)) {
  data_.assign(CheckedCount(shape_), 0.0);
}

Tensor::Tensor(Shape shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  if (data_.size() != CheckedCount(shape_)) {
    throw DimensionError("data length " + std::to_string(data_.size()) +
                         " does not match shape " + ShapeString(shape_));
  }
}

Tensor Tensor::Full(Shape shape, double value) {
  Tensor t(std::move(shape));
  t.Fill(value);
  return t;
}

Tensor Tensor::Vector(std::initializer_list<double> values) {
  return Tensor({values.size()}, std::vector<double>(values));
}

Tensor Tensor::Vector(std::span<const double> values) {
  return Tensor({values.size()}, std::vector<double>(values.begin(), values.end()));
}

Tensor Tensor::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t n_rows = rows.size();
  const std::size_t n_cols = n_rows ? rows.begin()->size() : 0;
  std::vector<double> data;
  data.reserve(n_rows * n_cols);
  for (const auto& r : rows) {
    if (r.size() != n_cols) throw DimensionError("ragged matrix literal");
    data.insert(data.end(), r.begin(), r.end());
  }
  return Tensor({n_rows, n_cols}, std::move(data));
}

Tensor Tensor::Identity(std::size_t n) {
  Tensor t({n, n});
  for (std::size_t i = 0; i < n; ++i) t(i, i) = 1.0;
  return t;
}

std::span<double> Tensor::row(std::size_t r) {
  const std::size_t stride = data_.size() / shape_[0];
  return std::span<double>(data_).subspan(r * stride, stride);
}

std::span<const double> Tensor::row(std::size_t r) const {
  const std::size_t stride = data_.size() / shape_[0];
  return std::span<const double>(data_).subspan(r * stride, stride);
}

Tensor Tensor::Reshaped(Shape shape) const { return Tensor(std::move(shape), data_); }

void Tensor::Fill(double value) { std::fill(data_.begin(), data_.end(), value); }

bool Tensor::AllFinite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](double v) { return std::isfinite(v); });
}

Tensor MatMul(const Tensor& a, const Tensor& b) {
  RequireRank2(a, "matmul");
  RequireRank2(b, "matmul");
  const std::size_t m = a.dim(0), k = a.dim(1), n = b.dim(1);
  if (b.dim(0) != k) {
    throw DimensionError("matmul inner dimensions differ: " +
                         ShapeString(a.shape()) + " x " +
                         ShapeString(b.shape()));
  }
  Tensor out({m, n});
  for (std::size_t i = 0; i < m; ++i) {
    double* out_row = out.data() + i * n;
    for (std::size_t p = 0; p < k; ++p) {
      const double a_ip = a(i, p);
      const double* b_row = b.data() + p * n;
      for (std::size_t j = 0; j < n; ++j) out_row[j] += a_ip * b_row[j];
    }
  }
  return out;
}

Tensor Transpose(const Tensor& a) {
  RequireRank2(a, "transpose");
  Tensor out({a.dim(1), a.dim(0)});
  for (std::size_t i = 0; i < a.dim(0); ++i)
    for (std::size_t j = 0; j < a.dim(1); ++j) out(j, i) = a(i, j);
  return out;
}

Tensor Elementwise(ElementwiseOp op, const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape()) {
    throw DimensionError("elementwise shapes differ: " +
                         ShapeString(a.shape()) + " vs " +
                         ShapeString(b.shape()));
  }
  Tensor out(a.shape());
  auto apply = [&](auto fn) {
    std::transform(a.values().begin(), a.values().end(), b.values().begin(),
                   out.values().begin(), fn);
  };
  switch (op) {
    case ElementwiseOp::kAdd: apply(std::plus<>{}); break;
    case ElementwiseOp::kSub: apply(std::minus<>{}); break;
    case ElementwiseOp::kMul: apply(std::multiplies<>{}); break;
  }
  return out;
}

Tensor Scale(const Tensor& a, double factor) {
  Tensor out = a;
  for (double& v : out.values()) v *= factor;
  return out;
}

double Reduce(ReduceOp op, const Tensor& a) {
  // Constructed tensors are never empty; the check guards moved-from values.
  if (a.size() == 0) throw ContractError("reduce over an empty tensor");
  const auto v = a.values();
  switch (op) {
    case ReduceOp::kSum:
      return std::accumulate(v.begin(), v.end(), 0.0);
    case ReduceOp::kMean:
      return std::accumulate(v.begin(), v.end(), 0.0) /
             static_cast<double>(v.size());
    case ReduceOp::kMax:
      return *std::max_element(v.begin(), v.end());
  }
  return 0.0;
}

}  // namespace riskcast
