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

#include <cmath>
#include <vector>

#include "doctest.h"
#include "riskcast/error.h"
#include "riskcast/rng.h"
#include "riskcast/tensor.h"
#include "test_util.h"

namespace riskcast {
namespace {

using testing::RandN;

// Triple loop, written independently of the library kernel.
Tensor NaiveMatMul(const Tensor& a, const Tensor& b) {
  Tensor c({a.dim(0), b.dim(1)});
  for (std::size_t i = 0; i < a.dim(0); ++i) {
    for (std::size_t j = 0; j < b.dim(1); ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < a.dim(1); ++k) s += a(i, k) * b(k, j);
      c(i, j) = s;
    }
  }
  return c;
}

TEST_CASE("tensor construction keeps size equal to shape product") {
  Tensor t({2, 3, 4});
  CHECK(t.size() == 24);
  CHECK(t.rank() == 3);
  CHECK(Reduce(ReduceOp::kSum, t) == 0.0);
  CHECK_THROWS_AS(Tensor({2, 3}, std::vector<double>(5)), DimensionError);
  CHECK_THROWS_AS(Tensor({2, 0}), DimensionError);
  CHECK(t.Reshaped({6, 4}).size() == 24);
  CHECK_THROWS_AS(t.Reshaped({5, 5}), DimensionError);
}

TEST_CASE("matmul worked examples") {
  const Tensor m = Tensor::Matrix({{3, 4}, {5, 6}});
  CHECK(MatMul(Tensor::Identity(2), m) == m);
  const Tensor dot = MatMul(Tensor::Matrix({{1, 2}}), Tensor::Matrix({{3}, {4}}));
  CHECK(dot.shape() == Shape{1, 1});
  CHECK(dot[0] == 11.0);
}

TEST_CASE("matmul rejects zero dims and mismatched inner dims") {
  CHECK_THROWS_AS(MatMul(Tensor({1, 0}), Tensor({0, 1})), DimensionError);
  CHECK_THROWS_AS(MatMul(Tensor({2, 3}), Tensor({2, 3})), DimensionError);
  CHECK_THROWS_AS(MatMul(Tensor::Vector({1, 2}), Tensor::Identity(2)), DimensionError);
}

TEST_CASE("matmul matches a naive oracle on random shapes") {
  SeededRng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t m = 1 + rng.Below(7), k = 1 + rng.Below(7), n = 1 + rng.Below(7);
    const Tensor a = RandN(rng, {m, k});
    const Tensor b = RandN(rng, {k, n});
    const Tensor got = MatMul(a, b);
    const Tensor want = NaiveMatMul(a, b);
    for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-14));
  }
}

TEST_CASE("matmul is associative within 1e-9") {
  SeededRng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const Tensor a = RandN(rng, {3, 4});
    const Tensor b = RandN(rng, {4, 5});
    const Tensor c = RandN(rng, {5, 2});
    const Tensor left = MatMul(MatMul(a, b), c);
    const Tensor right = MatMul(a, MatMul(b, c));
    for (std::size_t i = 0; i < left.size(); ++i) CHECK(std::abs(left[i] - right[i]) < 1e-9);
  }
}

TEST_CASE("elementwise worked examples") {
  CHECK(Add(Tensor::Vector({1, 2}), Tensor::Vector({0, 0})) == Tensor::Vector({1, 2}));
  CHECK(Mul(Tensor::Vector({2, 3}), Tensor::Vector({4, 5})) == Tensor::Vector({8, 15}));
  CHECK(Sub(Tensor::Vector({1}), Tensor::Vector({1})) == Tensor::Vector({0}));
  CHECK_THROWS_AS(Add(Tensor::Vector({1, 2}), Tensor::Vector({1, 2, 3})), DimensionError);
  CHECK(Scale(Tensor::Vector({1, -2}), 3.0) == Tensor::Vector({3, -6}));
}

TEST_CASE("elementwise ops commute with transposition") {
  SeededRng rng(5);
  const Tensor a = RandN(rng, {3, 4});
  const Tensor b = RandN(rng, {3, 4});
  for (ElementwiseOp op : {ElementwiseOp::kAdd, ElementwiseOp::kSub, ElementwiseOp::kMul}) {
    CHECK(Transpose(Elementwise(op, a, b)) == Elementwise(op, Transpose(a), Transpose(b)));
  }
  CHECK(Transpose(Transpose(a)) == a);
}

TEST_CASE("reduce worked examples") {
  CHECK(Reduce(ReduceOp::kSum, Tensor::Vector({1, 2, 3})) == 6.0);
  CHECK(Reduce(ReduceOp::kMean, Tensor::Vector({5, 5, 5, 5})) == 5.0);
  CHECK(Reduce(ReduceOp::kMax, Tensor::Vector({-1, -7})) == -1.0);
}

TEST_CASE("rng uniform(0,0) yields zeros") {
  SeededRng rng(1);
  const Tensor t = RandomTensor(rng, {4, 3}, UniformDist{0.0, 0.0});
  for (double v : t.values()) CHECK(v == 0.0);
}

TEST_CASE("rng fresh generators with equal seeds agree") {
  SeededRng a(42), b(42);
  CHECK(RandomTensor(a, {3}, UniformDist{}) == RandomTensor(b, {3}, UniformDist{}));
  SeededRng c(99), d(99);
  for (int i = 0; i < 1000; ++i) REQUIRE(c.NextU64() == d.NextU64());
}

TEST_CASE("rng normal draws have mean near zero") {
  SeededRng rng(2024);
  const Tensor t = RandomTensor(rng, {10000}, NormalDist{0.0, 1.0});
  CHECK(std::abs(Reduce(ReduceOp::kMean, t)) < 0.05);
  CHECK(t.AllFinite());
}

TEST_CASE("rng uniform stays in range and Below is bounded") {
  SeededRng rng(8);
  for (int i = 0; i < 5000; ++i) {
    const double u = rng.Uniform01();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    REQUIRE(rng.Below(7) < 7);
  }
}

TEST_CASE("split streams do not advance the parent and differ per key") {
  SeededRng parent(17);
  const auto before = parent.state();
  SeededRng s1 = parent.Split(1);
  SeededRng s2 = parent.Split(2);
  CHECK(parent.state() == before);
  CHECK(s1.NextU64() != s2.NextU64());
  SeededRng again = parent.Split(1);
  SeededRng s1b = parent.Split(1);
  CHECK(again.NextU64() == s1b.NextU64());
}

}  // namespace
}  // namespace riskcast
