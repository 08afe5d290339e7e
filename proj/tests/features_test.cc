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

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "riskcast/data_io.h"
#include "riskcast/error.h"
#include "riskcast/features.h"
#include "riskcast/log.h"
#include "riskcast/pipeline.h"
#include "test_util.h"

namespace riskcast {
namespace {

Date D(int y, unsigned m, unsigned d) {
  return Date(std::chrono::year{y} / m / d);
}

std::vector<Date> Days(std::size_t n, Date start = D(2021, 1, 4)) {
  std::vector<Date> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(start + std::chrono::days(i));
  return out;
}

SentimentLexicon GainLoss() {
  SentimentLexicon lex;
  lex.positive = {"gain"};
  lex.negative = {"loss"};
  return lex;
}

TEST_CASE("moving average worked examples") {
  const MaskedSeries c = MovingAverage(std::vector<double>(8, 7.0), 5);
  for (std::size_t t = 4; t < 8; ++t) CHECK(c.values[t] == 7.0);

  const MaskedSeries m = MovingAverage(std::vector<double>{1, 2, 3, 4, 5}, 2);
  CHECK(m.missing == std::vector<bool>{true, false, false, false, false});
  CHECK(std::vector<double>(m.values.begin() + 1, m.values.end()) ==
        std::vector<double>{1.5, 2.5, 3.5, 4.5});

  const std::vector<double> s = {3, -1, 4, 1, -5};
  const MaskedSeries id = MovingAverage(s, 1);
  CHECK(id.values == s);
  CHECK(std::none_of(id.missing.begin(), id.missing.end(), [](bool b) { return b; }));
  CHECK_THROWS_AS(MovingAverage(s, 0), ParameterError);
}

TEST_CASE("moving average matches brute-force window means") {
  SeededRng rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 5 + rng.Below(40);
    const std::size_t w = 1 + rng.Below(n);
    std::vector<double> s(n);
    for (double& v : s) v = rng.Normal(0, 10);
    const MaskedSeries m = MovingAverage(s, w);
    for (std::size_t t = 0; t < n; ++t) {
      REQUIRE(m.missing[t] == (t + 1 < w));
      if (t + 1 < w) continue;
      double sum = 0.0;
      for (std::size_t j = t + 1 - w; j <= t; ++j) sum += s[j];
      CHECK(std::abs(m.values[t] - sum / static_cast<double>(w)) < 1e-12);
    }
  }
}

TEST_CASE("sentiment scoring worked examples") {
  const SentimentLexicon lex = GainLoss();
  const SentimentScores empty = ScoreSentiment("", lex);
  CHECK(empty.pos == 0.0);
  CHECK(empty.neg == 0.0);
  CHECK(empty.neu == 1.0);
  CHECK(empty.compound == 0.0);

  const SentimentScores s = ScoreSentiment("gain gain loss", lex);
  CHECK(s.pos == doctest::Approx(2.0 / 3.0));
  CHECK(s.neg == doctest::Approx(1.0 / 3.0));
  CHECK(s.neu == 0.0);
  CHECK(s.compound == doctest::Approx(0.25));

  const SentimentScores none = ScoreSentiment("markets were quiet", lex);
  CHECK(none.pos == 0.0);
  CHECK(none.neu == 1.0);
  CHECK(none.compound == 0.0);

  // Tokens are case-folded and split on punctuation.
  CHECK(ScoreSentiment("GAIN, Loss!", lex).compound == 0.0);
  CHECK(ScoreSentiment("Gain.", lex).pos == 1.0);
}

TEST_CASE("sentiment fractions sum to exactly one") {
  const SentimentLexicon lex = SentimentLexicon::Default();
  const std::vector<std::string> words = {"gain", "loss", "rally", "crash", "the",
                                          "bank", "fears", "record", "flat"};
  SeededRng rng(3);
  for (int trial = 0; trial < 2000; ++trial) {
    std::string text;
    const std::size_t n = 1 + rng.Below(30);
    for (std::size_t i = 0; i < n; ++i) text += words[rng.Below(words.size())] + " ";
    const SentimentScores s = ScoreSentiment(text, lex);
    REQUIRE(s.pos + s.neg + s.neu == 1.0);
    REQUIRE(std::abs(s.compound) < 1.0);
  }
}

TEST_CASE("lexicon parsing and validation") {
  std::istringstream in("# finance terms\n[positive]\ngain\nRally\n\n[negative]\nloss\n");
  const SentimentLexicon lex = SentimentLexicon::Parse(in);
  CHECK(lex.positive.count("gain") == 1);
  CHECK(lex.negative.count("loss") == 1);
  SentimentLexicon bad = GainLoss();
  bad.negative.insert("gain");
  CHECK_THROWS_AS(bad.Validate(), ParameterError);
  CHECK_NOTHROW(SentimentLexicon::Default().Validate());
  std::ostringstream out;
  lex.Write(out);
  std::istringstream back(out.str());
  const SentimentLexicon again = SentimentLexicon::Parse(back);
  CHECK(again.positive == lex.positive);
  CHECK(again.negative == lex.negative);
}

TEST_CASE("daily sentiment aggregation") {
  const std::vector<Date> cal = Days(3);
  SentimentScores a, b;
  a.compound = 0.2;
  a.pos = 0.5;
  a.neu = 0.5;
  b.compound = 0.6;
  b.neg = 0.25;
  b.neu = 0.75;
  const std::vector<DatedSentiment> items = {{cal[0], a}, {cal[0], b}, {cal[2], a}};
  const TimeSeriesFrame f = AggregateDailySentiment(items, cal);
  REQUIRE(f.rows() == 3);
  CHECK(f.column("compound").values[0] == doctest::Approx(0.4));
  CHECK(f.column("pos").values[0] == doctest::Approx(0.25));
  // Gap day gets the neutral fill.
  CHECK(f.column("pos").values[1] == 0.0);
  CHECK(f.column("neg").values[1] == 0.0);
  CHECK(f.column("neu").values[1] == 1.0);
  CHECK(f.column("compound").values[1] == 0.0);
  // Single item passes through.
  CHECK(f.column("compound").values[2] == 0.2);
  CHECK(f.column("neu").values[2] == 0.5);
}

TEST_CASE("sentiment dated on a non-trading day rolls to the next trading day") {
  const std::vector<Date> cal = {D(2021, 1, 8), D(2021, 1, 11)};  // Fri, Mon
  SentimentScores s;
  s.compound = 0.5;
  const std::vector<DatedSentiment> items = {{D(2021, 1, 9), s}, {D(2021, 1, 12), s}};
  const TimeSeriesFrame f = AggregateDailySentiment(items, cal);
  CHECK(f.column("compound").values == std::vector<double>{0.0, 0.5});
}

TEST_CASE("standardization worked examples") {
  TimeSeriesFrame f(Days(3));
  f.AddColumn("x", {1, 2, 3});
  f.AddColumn("k", {4, 4, 4});
  const StandardizationStats st = FitStandardize(f, {0, 3});
  CHECK(st.mean[0] == 2.0);
  CHECK(st.stddev[0] == doctest::Approx(std::sqrt(2.0 / 3.0)));
  CHECK(st.zero_variance == std::vector<bool>{false, true});
  const TimeSeriesFrame z = ApplyStandardize(f, st);
  CHECK(z.column("x").values[0] == doctest::Approx(-1.2247).epsilon(1e-4));
  CHECK(z.column("x").values[1] == 0.0);
  CHECK(z.column("x").values[2] == doctest::Approx(1.2247).epsilon(1e-4));
  CHECK(z.column("k").values == std::vector<double>{0, 0, 0});
  CHECK_THROWS_AS(FitStandardize(f, {2, 2}), ContractError);
}

TEST_CASE("standardization uses only the training rows and round-trips") {
  SeededRng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 10 + rng.Below(30);
    const std::size_t train = 3 + rng.Below(n - 3);
    TimeSeriesFrame f(Days(n));
    std::vector<double> v(n);
    for (double& x : v) x = rng.Normal(50, 20);
    f.AddColumn("v", v);
    const StandardizationStats st = FitStandardize(f, {0, train});
    const TimeSeriesFrame z = ApplyStandardize(f, st);
    double sum = 0.0;
    for (std::size_t r = 0; r < train; ++r) sum += z.column("v").values[r];
    CHECK(std::abs(sum / static_cast<double>(train)) < 1e-9);
    for (std::size_t r = 0; r < n; ++r) {
      CHECK(std::abs(z.column("v").values[r] * st.stddev[0] + st.mean[0] - v[r]) < 1e-9);
    }
    // Changing a non-training row leaves the statistics untouched.
    TimeSeriesFrame g(Days(n));
    std::vector<double> w = v;
    w[n - 1] += 1000.0;
    g.AddColumn("v", w);
    if (train < n) CHECK(FitStandardize(g, {0, train}).mean == st.mean);
  }
}

TEST_CASE("one-hot encoding") {
  const std::vector<std::string> vocab = {"a", "b", "c", "d"};
  const std::vector<Date> cal = Days(3);
  const std::vector<PolicyEvent> events = {{cal[0], "c"}, {cal[2], "a"}, {cal[2], "d"}};
  const TimeSeriesFrame f = OneHotEncode(events, vocab, cal);
  auto row = [&](std::size_t r) {
    std::vector<double> out;
    for (const Column& c : f.columns()) out.push_back(c.values[r]);
    return out;
  };
  CHECK(row(0) == std::vector<double>{0, 0, 1, 0});
  CHECK(row(1) == std::vector<double>{0, 0, 0, 0});
  CHECK(row(2) == std::vector<double>{1, 0, 0, 1});
  CHECK(f.column_names() == std::vector<std::string>{"policy_a", "policy_b", "policy_c", "policy_d"});
  const std::vector<PolicyEvent> unknown = {{cal[1], "z"}};
  CHECK_THROWS_AS(OneHotEncode(unknown, vocab, cal), SchemaError);
}

TEST_CASE("alignment by date") {
  TimeSeriesFrame market({D(2021, 3, 30), D(2021, 3, 31), D(2021, 4, 1), D(2021, 6, 29)});
  market.AddColumn("close", {10, 11, 12, 13});
  TimeSeriesFrame same(market.dates());
  same.AddColumn("other", {1, 2, 3, 4});
  TimeSeriesFrame quarterly({D(2021, 3, 31)});
  quarterly.AddColumn("profit", {5.5});

  const std::vector<AlignSource> plain = {{&market, FillRule::kExact, {}},
                                          {&same, FillRule::kExact, {}}};
  const TimeSeriesFrame a = AlignByDate(plain);
  CHECK(a.rows() == 4);
  CHECK(a.column_names() == std::vector<std::string>{"close", "other"});

  const std::vector<AlignSource> ff = {{&market, FillRule::kExact, {}},
                                       {&quarterly, FillRule::kForwardFill, {}}};
  const TimeSeriesFrame b = AlignByDate(ff);
  // 2021-03-30 predates the first report and is dropped.
  REQUIRE(b.rows() == 3);
  CHECK(b.dates().front() == D(2021, 3, 31));
  CHECK(b.dates().back() == D(2021, 6, 29));
  CHECK(b.column("profit").values == std::vector<double>{5.5, 5.5, 5.5});
  CHECK(b.column("close").values == std::vector<double>{11, 12, 13});
}

TEST_CASE("window construction") {
  TimeSeriesFrame f(Days(10));
  std::vector<double> idx(10);
  for (std::size_t i = 0; i < 10; ++i) idx[i] = static_cast<double>(i);
  f.AddColumn("x", idx);
  f.AddColumn("s", idx);
  f.AddColumn("y", idx);
  const SampleSet set = BuildWindows(f, {"x"}, {"s"}, "y", 5, 1);
  REQUIRE(set.size() == 5);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(set.seq[i](4, 0) == static_cast<double>(i + 4));
    CHECK(set.stat[i][0] == static_cast<double>(i + 4));
    CHECK(set.y[i] == static_cast<double>(i + 5));
    CHECK(set.sample_dates[i] < set.target_dates[i]);
  }
  TimeSeriesFrame g(Days(5));
  g.AddColumn("x", {1, 2, 3, 4, 5});
  CHECK_THROWS_AS(BuildWindows(g, {"x"}, {"x"}, "x", 5, 1), InsufficientDataError);
}

TEST_CASE("window counts and contents match brute force on random frames") {
  SeededRng rng(19);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t rows = 4 + rng.Below(40);
    const std::size_t window = 1 + rng.Below(rows - 1);
    const std::size_t horizon = 1 + rng.Below(rows - window);
    TimeSeriesFrame f(Days(rows));
    for (const char* name : {"a", "b", "c"}) {
      std::vector<double> v(rows);
      for (double& x : v) x = rng.Normal(0, 1);
      f.AddColumn(name, v);
    }
    const SampleSet set = BuildWindows(f, {"a", "b"}, {"c"}, "c", window, horizon);
    REQUIRE(set.size() == rows - window - horizon + 1);
    for (std::size_t i = 0; i < set.size(); ++i) {
      for (std::size_t r = 0; r < window; ++r) {
        CHECK(set.seq[i](r, 1) == f.column("b").values[i + r]);
      }
      CHECK(set.y[i] == f.column("c").values[i + window - 1 + horizon]);
    }
  }
}

TEST_CASE("prepared synthetic data never looks ahead") {
  SynthConfig sc;
  sc.n_days = 400;
  const DatasetBundle bundle = SynthGenerate(sc);
  FeatureConfig fc;
  fc.window = 10;
  const PreparedData data = PrepareDataset(bundle, fc, SplitSpec{}, SentimentLexicon::Default());
  const TimeSeriesFrame frame = BuildFeatureFrame(bundle, fc, SentimentLexicon::Default());
  REQUIRE(data.all.size() > 100);
  for (std::size_t i = 0; i < data.all.size(); ++i) {
    const std::size_t input_end = *frame.RowOf(data.all.sample_dates[i]);
    const std::size_t target_row = *frame.RowOf(data.all.target_dates[i]);
    // The target is the std of returns over rows target_row - vol_window + 1 ..
    // target_row; each return uses the previous close, which is input_end at
    // the earliest.
    REQUIRE(target_row + 1 >= fc.vol_window + input_end + 1);
    REQUIRE(target_row - fc.vol_window + 1 > input_end);
  }
  // Standardized training inputs have zero mean on market columns.
  double sum = 0.0;
  for (const Tensor& s : data.train.seq) sum += s(s.dim(0) - 1, 0);
  CHECK(std::abs(sum / static_cast<double>(data.train.size())) < 0.2);
  for (double y : data.train.y) {
    REQUIRE(y >= 0.0);
    REQUIRE(y <= 1.0);
  }
}

TEST_CASE("feature config validation") {
  FeatureConfig fc;
  CHECK_NOTHROW(fc.Validate());
  fc.horizon = 3;
  CHECK_THROWS_AS(fc.Validate(), ParameterError);
  fc = FeatureConfig{};
  fc.window = 0;
  CHECK_THROWS_AS(fc.Validate(), ParameterError);
}

}  // namespace
}  // namespace riskcast
