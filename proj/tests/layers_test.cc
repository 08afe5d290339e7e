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
#include "riskcast/layers.h"
#include "riskcast/rng.h"
#include "test_util.h"

namespace riskcast {
namespace {

using testing::Dot;
using testing::MaxRelErr;
using testing::NumericGrad;
using testing::RandN;

constexpr double kGradTol = 1e-4;

TEST_CASE("conv1d worked examples") {
  Conv1DLayer diff = Conv1DLayer::Create(1, 1, 3);
  diff.kernels = Tensor({1, 3, 1}, {1, 0, -1});
  const Tensor x({4, 1}, {1, 2, 3, 4});
  CHECK(Conv1DForward(diff, x) == Tensor({2, 1}, {-2, -2}));

  Conv1DLayer delta = Conv1DLayer::Create(1, 1, 1);
  delta.kernels = Tensor({1, 1, 1}, {1});
  CHECK(Conv1DForward(delta, x) == x);

  Conv1DLayer bias_only = Conv1DLayer::Create(2, 1, 2);
  bias_only.bias = Tensor::Vector({0.5});
  const Tensor y = Conv1DForward(bias_only, Tensor({5, 2}));
  for (double v : y.values()) CHECK(v == 0.5);
}

TEST_CASE("conv1d matches a brute-force double sum") {
  SeededRng rng(21);
  Conv1DLayer layer = Conv1DLayer::Create(3, 2, 2);
  layer.Initialize(rng);
  const Tensor x = RandN(rng, {6, 3});
  const Tensor y = Conv1DForward(layer, x);
  REQUIRE(y.shape() == Shape{5, 2});
  for (std::size_t t = 0; t < 5; ++t) {
    for (std::size_t c = 0; c < 2; ++c) {
      double s = layer.bias[c];
      for (std::size_t j = 0; j < 2; ++j) {
        for (std::size_t i = 0; i < 3; ++i) s += layer.kernels[(c * 2 + j) * 3 + i] * x(t + j, i);
      }
      CHECK(y(t, c) == doctest::Approx(s).epsilon(1e-14));
    }
  }
}

TEST_CASE("conv1d rejects windows longer than the input") {
  Conv1DLayer layer = Conv1DLayer::Create(1, 1, 3);
  CHECK_THROWS_AS(Conv1DForward(layer, Tensor({2, 1})), DimensionError);
  CHECK_THROWS_AS(Conv1DForward(layer, Tensor({4, 2})), DimensionError);
}

TEST_CASE("conv1d backward: zero upstream and finite differences") {
  SeededRng rng(4);
  Conv1DLayer layer = Conv1DLayer::Create(2, 2, 3);
  layer.Initialize(rng);
  Tensor x = RandN(rng, {6, 2});
  Conv1DCache cache;
  const Tensor y = Conv1DForward(layer, x, &cache);

  const Conv1DGrads zero = Conv1DBackward(layer, cache, Tensor(y.shape()));
  for (const Tensor* g : {&zero.d_input, &zero.d_kernels, &zero.d_bias}) {
    for (double v : g->values()) CHECK(v == 0.0);
  }

  const Tensor w = RandN(rng, y.shape());
  const Conv1DGrads g = Conv1DBackward(layer, cache, w);
  auto loss = [&] { return Dot(w, Conv1DForward(layer, x)); };
  CHECK(MaxRelErr(g.d_kernels, NumericGrad(layer.kernels, loss)) < kGradTol);
  CHECK(MaxRelErr(g.d_bias, NumericGrad(layer.bias, loss)) < kGradTol);
  CHECK(MaxRelErr(g.d_input, NumericGrad(x, loss)) < kGradTol);

  // Bias gradient is the per-channel sum of the upstream gradient.
  for (std::size_t c = 0; c < 2; ++c) {
    double s = 0.0;
    for (std::size_t t = 0; t < y.dim(0); ++t) s += w(t, c);
    CHECK(g.d_bias[c] == doctest::Approx(s));
  }
}

TEST_CASE("conv1d single-weight kernel gradient is sum of x times upstream") {
  Conv1DLayer layer = Conv1DLayer::Create(1, 1, 1);
  layer.kernels = Tensor({1, 1, 1}, {0.7});
  const Tensor x({3, 1}, {1.0, -2.0, 0.5});
  const Tensor dy({3, 1}, {0.3, 0.1, -1.0});
  Conv1DCache cache;
  Conv1DForward(layer, x, &cache);
  const Conv1DGrads g = Conv1DBackward(layer, cache, dy);
  CHECK(g.d_kernels[0] == doctest::Approx(1.0 * 0.3 - 2.0 * 0.1 - 0.5));
}

TEST_CASE("conv1d backward rejects a cache from another shape") {
  Conv1DLayer layer = Conv1DLayer::Create(1, 1, 2);
  Conv1DCache cache;
  Conv1DForward(layer, Tensor({5, 1}), &cache);
  CHECK_THROWS_AS(Conv1DBackward(layer, cache, Tensor({3, 1})), ContractError);
}

TEST_CASE("maxpool worked examples") {
  const Tensor x({4, 1}, {1, 3, 2, 0});
  CHECK(MaxPool1D(x, 2) == Tensor({2, 1}, {3, 2}));
  CHECK(MaxPool1D(x, 1) == x);
  CHECK_THROWS_AS(MaxPool1D(x, 0), ParameterError);
  CHECK_THROWS_AS(MaxPool1D(x, 5), DimensionError);
}

TEST_CASE("maxpool ties route gradient to the first element") {
  const Tensor x = Tensor::Full({4, 2}, 1.5);
  MaxPoolCache cache;
  const Tensor y = MaxPool1D(x, 2, &cache);
  const Tensor dx = MaxPool1DBackward(cache, Tensor::Full(y.shape(), 1.0));
  CHECK(dx == Tensor({4, 2}, {1, 1, 0, 0, 1, 1, 0, 0}));
}

TEST_CASE("maxpool matches an exhaustive window oracle") {
  SeededRng rng(6);
  const Tensor x = RandN(rng, {9, 3});
  const Tensor y = MaxPool1D(x, 3);
  REQUIRE(y.shape() == Shape{3, 3});
  for (std::size_t o = 0; o < 3; ++o) {
    for (std::size_t c = 0; c < 3; ++c) {
      double best = x(o * 3, c);
      for (std::size_t j = 1; j < 3; ++j) best = std::max(best, x(o * 3 + j, c));
      CHECK(y(o, c) == best);
    }
  }
}

TEST_CASE("identity conv composed with unit maxpool is the identity map") {
  SeededRng rng(12);
  const Tensor x = RandN(rng, {7, 1});
  Conv1DLayer delta = Conv1DLayer::Create(1, 1, 1);
  delta.kernels = Tensor({1, 1, 1}, {1});
  CHECK(MaxPool1D(Conv1DForward(delta, x), 1) == x);
}

TEST_CASE("lstm with zero parameters outputs zeros") {
  LSTMCell cell = LSTMCell::Create(3, 2);
  SeededRng rng(1);
  const Tensor hs = LSTMForward(cell, RandN(rng, {5, 3}), Tensor({2}), Tensor({2}));
  for (double v : hs.values()) CHECK(v == 0.0);
}

TEST_CASE("lstm scalar step matches the hand-evaluated recurrence") {
  LSTMCell cell = LSTMCell::Create(1, 1);
  // Gate order i, f, g, o.
  cell.w_x = Tensor({4, 1}, {0.5, -0.3, 0.8, 0.1});
  cell.w_h = Tensor({4, 1}, {0.2, 0.4, -0.6, 0.9});
  cell.b = Tensor::Vector({0.1, 0.2, -0.1, 0.05});
  const double x = 1.3, h0 = 0.25, c0 = -0.4;
  auto sig = [](double v) { return 1.0 / (1.0 + std::exp(-v)); };
  const double i = sig(0.5 * x + 0.2 * h0 + 0.1);
  const double f = sig(-0.3 * x + 0.4 * h0 + 0.2);
  const double g = std::tanh(0.8 * x - 0.6 * h0 - 0.1);
  const double o = sig(0.1 * x + 0.9 * h0 + 0.05);
  const double c1 = f * c0 + i * g;
  const double h1 = o * std::tanh(c1);
  const Tensor hs = LSTMForward(cell, Tensor({1, 1}, {x}), Tensor::Vector({h0}), Tensor::Vector({c0}));
  CHECK(hs[0] == doctest::Approx(h1).epsilon(1e-14));
}

TEST_CASE("lstm output depends only on the given initial state") {
  SeededRng rng(31);
  LSTMCell cell = LSTMCell::Create(2, 3);
  cell.Initialize(rng);
  const Tensor xs = RandN(rng, {4, 2});
  const Tensor a = LSTMForward(cell, xs, Tensor({3}), Tensor({3}));
  LSTMForward(cell, RandN(rng, {6, 2}), Tensor({3}), Tensor({3}));
  const Tensor b = LSTMForward(cell, xs, Tensor({3}), Tensor({3}));
  CHECK(a == b);
}

TEST_CASE("lstm hidden states are bounded by one") {
  SeededRng rng(77);
  LSTMCell cell = LSTMCell::Create(3, 4);
  cell.w_x = Scale(RandN(rng, cell.w_x.shape()), 5.0);
  cell.w_h = Scale(RandN(rng, cell.w_h.shape()), 5.0);
  const Tensor hs = LSTMForward(cell, Scale(RandN(rng, {20, 3}), 10.0), Tensor({4}), Tensor({4}));
  for (double v : hs.values()) CHECK(std::abs(v) <= 1.0);
}

TEST_CASE("lstm backward: zero upstream and finite differences") {
  SeededRng rng(9);
  LSTMCell cell = LSTMCell::Create(2, 2);
  cell.Initialize(rng);
  Tensor xs = RandN(rng, {3, 2});
  const Tensor h0({2}), c0({2});
  LSTMCache cache;
  const Tensor hs = LSTMForward(cell, xs, h0, c0, &cache);

  const LSTMGrads zero = LSTMBackward(cell, cache, Tensor(hs.shape()));
  for (const Tensor* g : {&zero.d_xs, &zero.d_w_x, &zero.d_w_h, &zero.d_b}) {
    for (double v : g->values()) CHECK(v == 0.0);
  }

  const Tensor w = RandN(rng, hs.shape());
  const LSTMGrads g = LSTMBackward(cell, cache, w);
  auto loss = [&] { return Dot(w, LSTMForward(cell, xs, h0, c0)); };
  CHECK(MaxRelErr(g.d_w_x, NumericGrad(cell.w_x, loss)) < kGradTol);
  CHECK(MaxRelErr(g.d_w_h, NumericGrad(cell.w_h, loss)) < kGradTol);
  CHECK(MaxRelErr(g.d_b, NumericGrad(cell.b, loss)) < kGradTol);
  CHECK(MaxRelErr(g.d_xs, NumericGrad(xs, loss)) < kGradTol);
}

TEST_CASE("lstm input at step t does not affect losses on earlier steps") {
  SeededRng rng(10);
  LSTMCell cell = LSTMCell::Create(2, 2);
  cell.Initialize(rng);
  const Tensor xs = RandN(rng, {4, 2});
  LSTMCache cache;
  const Tensor hs = LSTMForward(cell, xs, Tensor({2}), Tensor({2}), &cache);
  // Loss reads only step 1; inputs at steps 2 and 3 get exactly zero gradient.
  Tensor w(hs.shape());
  w(1, 0) = 1.0;
  w(1, 1) = -0.5;
  const LSTMGrads g = LSTMBackward(cell, cache, w);
  for (std::size_t t = 2; t < 4; ++t) {
    for (std::size_t f = 0; f < 2; ++f) CHECK(g.d_xs(t, f) == 0.0);
  }
  CHECK(std::abs(g.d_xs(0, 0)) + std::abs(g.d_xs(1, 0)) > 0.0);
}

TEST_CASE("dense worked examples") {
  DenseLayer id = DenseLayer::Create(3, 3);
  id.w = Tensor::Identity(3);
  CHECK(DenseForward(id, Tensor::Vector({1, -2, 4})) == Tensor::Vector({1, -2, 4}));

  DenseLayer d = DenseLayer::Create(2, 1);
  d.w = Tensor::Matrix({{1, 2}});
  d.b = Tensor::Vector({3});
  DenseCache cache;
  CHECK(DenseForward(d, Tensor::Vector({4, 5}), &cache) == Tensor::Vector({17}));
  const DenseGrads g = DenseBackward(d, cache, Tensor::Vector({0.75}));
  CHECK(g.d_b == Tensor::Vector({0.75}));
}

TEST_CASE("dense backward matches finite differences") {
  SeededRng rng(14);
  DenseLayer d = DenseLayer::Create(4, 3);
  d.Initialize(rng);
  Tensor x = RandN(rng, {4});
  DenseCache cache;
  DenseForward(d, x, &cache);
  const Tensor w = RandN(rng, {3});
  const DenseGrads g = DenseBackward(d, cache, w);
  auto loss = [&] { return Dot(w, DenseForward(d, x)); };
  CHECK(MaxRelErr(g.d_w, NumericGrad(d.w, loss)) < kGradTol);
  CHECK(MaxRelErr(g.d_b, NumericGrad(d.b, loss)) < kGradTol);
  CHECK(MaxRelErr(g.d_input, NumericGrad(x, loss)) < kGradTol);
}

TEST_CASE("activation worked examples") {
  CHECK(Activate(Activation::kRelu, -2.0) == 0.0);
  CHECK(Activate(Activation::kRelu, 3.0) == 3.0);
  CHECK(Activate(Activation::kSigmoid, 0.0) == 0.5);
  CHECK(ActivationDerivative(Activation::kTanh, 0.0) == 1.0);
}

TEST_CASE("activation derivatives match finite differences") {
  for (Activation a : {Activation::kRelu, Activation::kSigmoid, Activation::kTanh}) {
    for (double x : {-2.3, -0.4, 0.7, 1.9}) {
      const double num = (Activate(a, x + 1e-6) - Activate(a, x - 1e-6)) / 2e-6;
      CHECK(ActivationDerivative(a, x) == doctest::Approx(num).epsilon(1e-6));
    }
  }
}

TEST_CASE("dropout identities") {
  SeededRng rng(3);
  const Tensor x = RandN(rng, {50});
  CHECK(DropoutForward(DropoutSpec{0.0}, x, rng, Mode::kTrain).output == x);
  CHECK(DropoutForward(DropoutSpec{0.0}, x, rng, Mode::kInfer).output == x);
  CHECK(DropoutForward(DropoutSpec{0.7}, x, rng, Mode::kInfer).output == x);
  CHECK_THROWS_AS(DropoutForward(DropoutSpec{1.0}, x, rng, Mode::kTrain), ParameterError);
  CHECK_THROWS_AS(DropoutForward(DropoutSpec{-0.1}, x, rng, Mode::kTrain), ParameterError);
}

TEST_CASE("dropout preserves the expectation") {
  SeededRng rng(55);
  const DropoutResult r = DropoutForward(DropoutSpec{0.5}, Tensor::Full({100000}, 1.0), rng, Mode::kTrain);
  CHECK(std::abs(Reduce(ReduceOp::kMean, r.output) - 1.0) < 0.02);
  for (double m : r.mask.values()) CHECK((m == 0.0 || m == 2.0));
  const Tensor d = DropoutBackward(r.mask, Tensor::Full({100000}, 3.0));
  CHECK(d == Scale(r.mask, 3.0));
}

}  // namespace
}  // namespace riskcast
