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
#include "riskcast/models.h"
#include "riskcast/training.h"
#include "test_util.h"

namespace riskcast {
namespace {

using testing::MakeToySamples;
using testing::MaxRelErr;
using testing::NumericGrad;
using testing::RandN;

HybridDims TinyDims() {
  HybridDims d;
  d.window = 4;
  d.market_features = 2;
  d.sentiment_features = 2;
  d.static_features = 3;
  d.conv_width = 3;
  d.conv_channels = 2;
  d.hidden = 3;
  return d;
}

HybridModel RandomModel(const HybridDims& d, std::uint64_t seed, double dropout = 0.0) {
  HybridModel m(d, dropout);
  SeededRng rng(seed);
  m.Initialize(rng);
  return m;
}

double Sig(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Straight-line re-evaluation of the hybrid score with plain loops.
double ReferenceScore(const HybridModel& m, const Tensor& seq, const Tensor& stat) {
  const HybridDims& d = m.dims();
  const std::size_t T = d.window, fm = d.market_features, fs = d.sentiment_features;
  const std::size_t k = d.conv_width, C = d.conv_channels, H = d.hidden;
  const std::size_t F = fm + C;
  const Conv1DLayer& conv = m.conv();
  const LSTMCell& cell = m.lstm();

  std::vector<std::vector<double>> x(T, std::vector<double>(F, 0.0));
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t c = 0; c < fm; ++c) x[t][c] = seq(t, c);
    for (std::size_t o = 0; o < C; ++o) {
      double s = conv.bias[o];
      for (std::size_t j = 0; j < k; ++j) {
        // Output row t looks back over sentiment rows t-k+1 .. t.
        const long src = static_cast<long>(t) - static_cast<long>(k - 1) + static_cast<long>(j);
        if (src < 0) continue;
        for (std::size_t i = 0; i < fs; ++i) {
          s += conv.kernels[(o * k + j) * fs + i] * seq(static_cast<std::size_t>(src), fm + i);
        }
      }
      x[t][fm + o] = std::max(0.0, s);
    }
  }
  std::vector<double> h(H, 0.0), c(H, 0.0);
  for (std::size_t t = 0; t < T; ++t) {
    std::vector<double> z(4 * H);
    for (std::size_t r = 0; r < 4 * H; ++r) {
      double s = cell.b[r];
      for (std::size_t f = 0; f < F; ++f) s += cell.w_x[r * F + f] * x[t][f];
      for (std::size_t u = 0; u < H; ++u) s += cell.w_h[r * H + u] * h[u];
      z[r] = s;
    }
    for (std::size_t u = 0; u < H; ++u) {
      const double i = Sig(z[u]), f = Sig(z[H + u]), g = std::tanh(z[2 * H + u]),
                   o = Sig(z[3 * H + u]);
      c[u] = f * c[u] + i * g;
      h[u] = o * std::tanh(c[u]);
    }
  }
  double score = m.head().b[0];
  for (std::size_t u = 0; u < H; ++u) score += m.head().w[u] * h[u];
  for (std::size_t j = 0; j < d.static_features; ++j) score += m.head().w[H + j] * stat[j];
  return score;
}

TEST_CASE("zero-weight hybrid scores its head bias") {
  HybridModel m(TinyDims(), 0.0);
  m.head().b = Tensor::Vector({0.37});
  SeededRng rng(1);
  CHECK(HybridForward(m, RandN(rng, {4, 4}), RandN(rng, {3}), Mode::kInfer, nullptr) == 0.37);
}

TEST_CASE("inference is deterministic even with dropout configured") {
  const HybridModel m = RandomModel(TinyDims(), 2, 0.5);
  SeededRng rng(3);
  const Tensor seq = RandN(rng, {4, 4}), stat = RandN(rng, {3});
  SeededRng r1(1), r2(99);
  CHECK(HybridForward(m, seq, stat, Mode::kInfer, &r1) ==
        HybridForward(m, seq, stat, Mode::kInfer, &r2));
}

TEST_CASE("hybrid score matches a straight-line re-implementation") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const HybridModel m = RandomModel(TinyDims(), seed);
    SeededRng rng(100 + seed);
    const Tensor seq = RandN(rng, {4, 4}), stat = RandN(rng, {3});
    CHECK(HybridForward(m, seq, stat, Mode::kInfer, nullptr) ==
          doctest::Approx(ReferenceScore(m, seq, stat)).epsilon(1e-12));
  }
}

TEST_CASE("hybrid rejects mismatched inputs") {
  const HybridModel m = RandomModel(TinyDims(), 2);
  CHECK_THROWS_AS(HybridForward(m, Tensor({5, 4}), Tensor({3}), Mode::kInfer, nullptr),
                  DimensionError);
  CHECK_THROWS_AS(HybridForward(m, Tensor({4, 4}), Tensor({2}), Mode::kInfer, nullptr),
                  DimensionError);
}

TEST_CASE("hybrid backward with zero upstream gives zero gradients") {
  const HybridModel m = RandomModel(TinyDims(), 4);
  SeededRng rng(5);
  HybridCache cache;
  HybridForward(m, RandN(rng, {4, 4}), RandN(rng, {3}), Mode::kInfer, nullptr, &cache);
  const HybridGrads g = HybridBackward(m, cache, 0.0);
  for (const Tensor& t : g.params) {
    for (double v : t.values()) CHECK(v == 0.0);
  }
  for (double v : g.d_seq.values()) CHECK(v == 0.0);
}

TEST_CASE("hybrid gradients match finite differences") {
  for (std::uint64_t seed : {6u, 7u, 8u}) {
    HybridModel m = RandomModel(TinyDims(), seed);
    SeededRng rng(seed * 31);
    Tensor seq = RandN(rng, {4, 4});
    Tensor stat = RandN(rng, {3});
    HybridCache cache;
    HybridForward(m, seq, stat, Mode::kInfer, nullptr, &cache);
    const HybridGrads g = HybridBackward(m, cache, 1.0);
    auto score = [&] { return HybridForward(m, seq, stat, Mode::kInfer, nullptr); };
    const auto params = m.Parameters();
    REQUIRE(params.size() == g.params.size());
    for (std::size_t p = 0; p < params.size(); ++p) {
      INFO(params[p].name);
      CHECK(MaxRelErr(g.params[p], NumericGrad(*params[p].value, score)) < 1e-4);
    }
    CHECK(MaxRelErr(g.d_seq, NumericGrad(seq, score)) < 1e-4);
    CHECK(MaxRelErr(g.d_static, NumericGrad(stat, score)) < 1e-4);
  }
}

TEST_CASE("market columns reach the score only through the lstm") {
  HybridModel m = RandomModel(TinyDims(), 9);
  CHECK(m.conv().in_channels() == 2);  // sentiment only
  // Cut the lstm's market inputs: their gradient must vanish exactly, while
  // the sentiment columns still receive gradient through the conv path.
  for (std::size_t r = 0; r < m.lstm().w_x.dim(0); ++r) {
    m.lstm().w_x(r, 0) = 0.0;
    m.lstm().w_x(r, 1) = 0.0;
  }
  SeededRng rng(10);
  HybridCache cache;
  HybridForward(m, RandN(rng, {4, 4}), RandN(rng, {3}), Mode::kInfer, nullptr, &cache);
  const HybridGrads g = HybridBackward(m, cache, 1.0);
  double sentiment = 0.0;
  for (std::size_t t = 0; t < 4; ++t) {
    CHECK(g.d_seq(t, 0) == 0.0);
    CHECK(g.d_seq(t, 1) == 0.0);
    sentiment += std::abs(g.d_seq(t, 2)) + std::abs(g.d_seq(t, 3));
  }
  CHECK(sentiment > 0.0);
}

TEST_CASE("parameter order and count") {
  HybridModel m(TinyDims(), 0.1);
  std::vector<std::string> names;
  for (const auto& p : m.Parameters()) names.push_back(p.name);
  CHECK(names == std::vector<std::string>{"conv.kernels", "conv.bias", "lstm.w_x", "lstm.w_h",
                                          "lstm.b", "head.w", "head.b"});
  // conv 2*3*2+2, lstm 12*4+12*3+12, head 6+1
  CHECK(m.ParameterCount() == 14 + 96 + 7);
}

SampleSet PlantedLinear(SeededRng& rng, std::size_t n) {
  SampleSet s;
  for (std::size_t i = 0; i < n; ++i) {
    Tensor seq = RandN(rng, {1, 1});
    Tensor stat = RandN(rng, {1});
    s.y.push_back(2.0 * seq[0] + 3.0);
    s.seq.push_back(std::move(seq));
    s.stat.push_back(std::move(stat));
    s.sample_dates.push_back(Date{} + std::chrono::days(i));
    s.target_dates.push_back(Date{} + std::chrono::days(i + 1));
  }
  return s;
}

TEST_CASE("linear baseline recovers planted coefficients") {
  SeededRng rng(11);
  const LinearRegressionModel m = LinearFit(PlantedLinear(rng, 200));
  REQUIRE(m.weights.size() == 2);
  CHECK(std::abs(m.weights[0] - 2.0) < 1e-6);
  CHECK(std::abs(m.weights[1]) < 1e-6);
  CHECK(std::abs(m.bias - 3.0) < 1e-6);
}

TEST_CASE("linear baseline on a constant target is intercept only") {
  SeededRng rng(12);
  SampleSet s = MakeToySamples(rng, 80, 3, 2, 2);
  for (double& y : s.y) y = 0.42;
  const LinearRegressionModel m = LinearFit(s);
  for (double w : m.weights) CHECK(std::abs(w) < 1e-6);
  CHECK(std::abs(m.bias - 0.42) < 1e-6);
}

TEST_CASE("linear baseline is no worse than gradient descent") {
  SeededRng rng(13);
  const SampleSet s = MakeToySamples(rng, 120, 2, 2, 2, 0.05);
  const LinearRegressionModel fit = LinearFit(s);
  const std::size_t p = fit.input_size();
  std::vector<std::vector<double>> x;
  for (std::size_t i = 0; i < s.size(); ++i) x.push_back(FlattenSample(s.seq[i], s.stat[i]));
  std::vector<double> w(p, 0.0);
  double b = 0.0;
  const double n = static_cast<double>(s.size());
  for (int it = 0; it < 20000; ++it) {
    std::vector<double> gw(p, 0.0);
    double gb = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      double r = b - s.y[i];
      for (std::size_t j = 0; j < p; ++j) r += w[j] * x[i][j];
      for (std::size_t j = 0; j < p; ++j) gw[j] += 2.0 * r * x[i][j] / n;
      gb += 2.0 * r / n;
    }
    for (std::size_t j = 0; j < p; ++j) w[j] -= 0.05 * gw[j];
    b -= 0.05 * gb;
  }
  LinearRegressionModel gd = fit;
  gd.weights = w;
  gd.bias = b;
  auto mse = [&](const LinearRegressionModel& m) {
    double e = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double r = LinearPredict(m, s.seq[i], s.stat[i]) - s.y[i];
      e += r * r / n;
    }
    return e;
  };
  CHECK(mse(fit) <= mse(gd) + 1e-6);
}

TEST_CASE("random perturbations never lower the ridge objective") {
  SeededRng rng(14);
  const SampleSet s = MakeToySamples(rng, 150, 3, 2, 2, 0.1);
  for (double lambda : {1e-8, 1e-2, 1.0}) {
    const LinearRegressionModel m = LinearFit(s, lambda);
    const double base = RidgeObjective(m, s);
    for (int trial = 0; trial < 100; ++trial) {
      LinearRegressionModel q = m;
      std::vector<double> delta(q.weights.size());
      double norm = 0.0;
      for (double& v : delta) {
        v = rng.Normal(0, 1);
        norm += v * v;
      }
      norm = std::sqrt(norm);
      for (std::size_t j = 0; j < delta.size(); ++j) q.weights[j] += 1e-3 * delta[j] / norm;
      REQUIRE(RidgeObjective(q, s) >= base);
    }
  }
}

TEST_CASE("batch prediction") {
  SeededRng rng(15);
  HybridDims d = TinyDims();
  d.market_features = 1;
  d.sentiment_features = 1;
  d.static_features = 2;
  const HybridModel m = RandomModel(d, 16);
  const SampleSet s = MakeToySamples(rng, 12, 4, 2, 2);
  CHECK(PredictBatch(AnyModel(m), SampleSet{}).empty());
  const std::vector<Prediction> batch = PredictBatch(AnyModel(m), s);
  REQUIRE(batch.size() == 12);
  for (std::size_t i = 0; i < 12; ++i) {
    CHECK(batch[i].risk_score == HybridForward(m, s.seq[i], s.stat[i], Mode::kInfer, nullptr));
    CHECK(batch[i].date == s.sample_dates[i]);
  }
  const SampleSet wrong = MakeToySamples(rng, 3, 5, 2, 2);
  CHECK_THROWS_AS(PredictBatch(AnyModel(m), wrong), DimensionError);
  CHECK(ModelKindName(AnyModel(m)) == "hybrid");
}

}  // namespace
}  // namespace riskcast
