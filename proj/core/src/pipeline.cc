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

#include "riskcast/pipeline.h"

#include <cmath>

#include "riskcast/error.h"
#include "riskcast/log.h"

namespace riskcast {
namespace {

constexpr const char* kTargetColumn = "target_vol";

TimeSeriesFrame MarketFeatures(const TimeSeriesFrame& market,
                               const FeatureConfig& cfg) {
  const auto& open = market.column("open").values;
  const auto& close = market.column("close").values;
  const auto& volume = market.column("volume").values;
  const std::size_t n = market.rows();
  for (std::size_t t = 0; t < n; ++t) {
    if (!(open[t] > 0.0 && close[t] > 0.0 && volume[t] > 0.0)) {
      throw SchemaError("market row " + FormatDate(market.dates()[t]) +
                        " has a non-positive open, close or volume");
    }
  }

  TimeSeriesFrame out(market.dates());
  std::vector<double> ret(n, 0.0);
  std::vector<bool> ret_missing(n, false);
  ret_missing[0] = true;
  for (std::size_t t = 1; t < n; ++t) ret[t] = std::log(close[t] / close[t - 1]);
  out.AddColumn("ret", ret, ret_missing);

  std::vector<double> intraday(n);
  for (std::size_t t = 0; t < n; ++t) intraday[t] = std::log(close[t] / open[t]);
  out.AddColumn("intraday", std::move(intraday));

  for (std::size_t w : cfg.ma_windows) {
    MaskedSeries ma = MovingAverage(close, w);
    std::vector<double> gap(n, 0.0);
    for (std::size_t t = 0; t < n; ++t) {
      if (!ma.missing[t]) gap[t] = close[t] / ma.values[t] - 1.0;
    }
    out.AddColumn("ma" + std::to_string(w) + "_gap", std::move(gap),
                  std::move(ma.missing));
  }

  // Returns start at row 1, so the rolling window runs over ret[1..].
  std::vector<double> vol(n, 0.0);
  std::vector<bool> vol_missing(n, true);
  if (n > 1) {
    MaskedSeries rv = RollingStd(std::span<const double>(ret).subspan(1),
                                 cfg.vol_window);
    for (std::size_t t = 1; t < n; ++t) {
      vol[t] = rv.values[t - 1];
      vol_missing[t] = rv.missing[t - 1];
    }
  }
  out.AddColumn("realized_vol", vol, vol_missing);

  std::vector<double> log_volume(n);
  for (std::size_t t = 0; t < n; ++t) log_volume[t] = std::log(volume[t]);
  out.AddColumn("log_volume", std::move(log_volume));

  out.AddColumn(kTargetColumn, std::move(vol), std::move(vol_missing));
  return out;
}

std::vector<std::string> MarketColumns(const FeatureConfig& cfg) {
  std::vector<std::string> cols{"ret", "intraday"};
  for (std::size_t w : cfg.ma_windows) cols.push_back("ma" + std::to_string(w) + "_gap");
  cols.push_back("realized_vol");
  cols.push_back("log_volume");
  return cols;
}

const std::vector<std::string>& SentimentColumns() {
  static const std::vector<std::string> cols{"pos", "neg", "neu", "compound"};
  return cols;
}

const std::vector<std::string>& FundamentalColumns() {
  static const std::vector<std::string> cols{"profit", "debt_ratio", "cash_flow",
                                             "gdp",    "cpi",        "interest_rate"};
  return cols;
}

void ScaleTargets(SampleSet& samples, const TargetScaling& scaling) {
  for (double& y : samples.y) y = scaling.Apply(y);
}

}  // namespace

void FeatureConfig::Validate() const {
  if (window == 0 || horizon == 0 || vol_window < 2) {
    throw ParameterError("need window >= 1, horizon >= 1, vol_window >= 2");
  }
  if (horizon < vol_window) {
    throw ParameterError("horizon (" + std::to_string(horizon) +
                         ") must be >= vol_window (" + std::to_string(vol_window) +
                         ") so the target never overlaps the input window");
  }
  for (std::size_t w : ma_windows) {
    if (w == 0) throw ParameterError("moving-average windows must be >= 1");
  }
  if (policy_vocabulary.empty()) throw ParameterError("policy vocabulary is empty");
}

TimeSeriesFrame BuildFeatureFrame(const DatasetBundle& bundle,
                                  const FeatureConfig& cfg,
                                  const SentimentLexicon& lexicon) {
  cfg.Validate();
  bundle.Validate();
  const TimeSeriesFrame market = MarketFeatures(bundle.market, cfg);
  const auto& calendar = bundle.market.dates();

  std::vector<DatedSentiment> scored;
  scored.reserve(bundle.news.size());
  for (const auto& item : bundle.news) {
    scored.push_back({item.date, ScoreSentiment(item.text, lexicon)});
  }
  const TimeSeriesFrame sentiment = AggregateDailySentiment(scored, calendar);
  const TimeSeriesFrame policy =
      OneHotEncode(bundle.policy, cfg.policy_vocabulary, calendar);

  const std::vector<AlignSource> sources = {
      {&market, FillRule::kExact, {}},
      {&sentiment, FillRule::kConstant, {0.0, 0.0, 1.0, 0.0}},
      {&bundle.financial, FillRule::kForwardFill, {}},
      {&bundle.macro, FillRule::kForwardFill, {}},
      {&policy, FillRule::kConstant,
       std::vector<double>(cfg.policy_vocabulary.size(), 0.0)},
  };
  return AlignByDate(sources);
}

PreparedData PrepareDataset(const DatasetBundle& bundle, const FeatureConfig& cfg,
                            const SplitSpec& split, const SentimentLexicon& lexicon) {
  split.Validate();
  const TimeSeriesFrame frame = BuildFeatureFrame(bundle, cfg, lexicon);
  if (frame.rows() < cfg.window + cfg.horizon) {
    throw InsufficientDataError(
        "insufficient data: " + std::to_string(frame.rows()) +
        " aligned rows, need at least " + std::to_string(cfg.window + cfg.horizon));
  }
  const std::size_t n = frame.rows() - cfg.window - cfg.horizon + 1;

  PreparedData out;
  Preprocessing& prep = out.prep;
  prep.features = cfg;
  prep.split = split;
  prep.counts = ComputeSplit(n, split);
  prep.seq_columns = MarketColumns(cfg);
  prep.market_features = prep.seq_columns.size();
  for (const auto& c : SentimentColumns()) prep.seq_columns.push_back(c);
  prep.sentiment_features = SentimentColumns().size();
  prep.static_columns = FundamentalColumns();
  for (const auto& v : cfg.policy_vocabulary) prep.static_columns.push_back("policy_" + v);

  // Statistics come only from rows visible to training inputs. Sentiment
  // scores are already on a common bounded scale, so they are centered but
  // not rescaled; a zeroed sentiment channel then equals its training mean.
  std::vector<std::string> standardized = prep.seq_columns;
  for (const auto& c : FundamentalColumns()) standardized.push_back(c);
  const RowRange train_rows{0, cfg.window - 1 + prep.counts.train};
  prep.stats = FitStandardize(frame, train_rows, standardized);
  for (std::size_t i = prep.market_features;
       i < prep.market_features + prep.sentiment_features; ++i) {
    prep.stats.stddev[i] = 1.0;
    prep.stats.zero_variance[i] = false;
  }

  out.all = BuildWindows(ApplyStandardize(frame, prep.stats), prep.seq_columns,
                         prep.static_columns, kTargetColumn, cfg.window, cfg.horizon);

  double lo = out.all.y[0], hi = out.all.y[0];
  for (std::size_t i = 0; i < prep.counts.train; ++i) {
    lo = std::min(lo, out.all.y[i]);
    hi = std::max(hi, out.all.y[i]);
  }
  if (!(hi > lo)) {
    Warn("training targets are constant; target scaling uses unit range");
    hi = lo + 1.0;
  }
  prep.target = {lo, hi};
  ScaleTargets(out.all, prep.target);

  const auto& c = prep.counts;
  out.train = out.all.Slice(0, c.train);
  out.val = out.all.Slice(c.train, c.train + c.val);
  out.test = out.all.Slice(c.train + c.val, n);
  prep.train_end = out.train.sample_dates.back();
  prep.test_begin = out.test.sample_dates.front();
  return out;
}

SampleSet BuildSamples(const DatasetBundle& bundle, const Preprocessing& prep,
                       const SentimentLexicon& lexicon) {
  const TimeSeriesFrame frame = BuildFeatureFrame(bundle, prep.features, lexicon);
  SampleSet samples =
      BuildWindows(ApplyStandardize(frame, prep.stats), prep.seq_columns,
                   prep.static_columns, kTargetColumn, prep.features.window,
                   prep.features.horizon);
  ScaleTargets(samples, prep.target);
  return samples;
}

HybridDims DimsFor(const Preprocessing& prep, const HybridDims& base) {
  HybridDims dims = base;
  dims.window = prep.features.window;
  dims.market_features = prep.market_features;
  dims.sentiment_features = prep.sentiment_features;
  dims.static_features = prep.static_columns.size();
  return dims;
}

}  // namespace riskcast
