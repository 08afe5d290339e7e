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

#ifndef RISKCAST_PIPELINE_H_
#define RISKCAST_PIPELINE_H_

// End-to-end sample preparation: market features, sentiment, financial and
// policy inputs are aligned by date, standardized with statistics from the
// training rows only, cut into windows and split chronologically.
//
// Sequence channels, in order:
//   market block     ret, intraday, ma<w>_gap for each average, realized_vol,
//                    log_volume
//   sentiment block  pos, neg, neu, compound
// Static channels: profit, debt_ratio, cash_flow, gdp, cpi, interest_rate
// (standardized, forward-filled) then policy_<category> indicators.
//
// The target for the window ending on row t is realized_vol on row
// t + horizon, i.e. the population standard deviation of the log returns on
// rows t+horizon-vol_window+1 .. t+horizon, min-max scaled with the range of
// the training targets.

#include <cstddef>
#include <string>
#include <vector>

#include "riskcast/data_io.h"
#include "riskcast/features.h"
#include "riskcast/models.h"

namespace riskcast {

struct FeatureConfig {
  std::size_t window = 20;
  std::size_t horizon = 5;
  std::size_t vol_window = 5;
  std::vector<std::size_t> ma_windows = {5, 20, 60};
  std::vector<std::string> policy_vocabulary = DefaultPolicyVocabulary();

  // horizon >= vol_window keeps the target window after the input window.
  void Validate() const;

  friend bool operator==(const FeatureConfig&, const FeatureConfig&) = default;
};

struct TargetScaling {
  double min = 0.0;
  double max = 1.0;

  double Apply(double raw) const { return (raw - min) / (max - min); }
};

// Everything needed to turn raw data into model inputs the same way twice.
struct Preprocessing {
  FeatureConfig features;
  std::vector<std::string> seq_columns;
  std::vector<std::string> static_columns;
  std::size_t market_features = 0;
  std::size_t sentiment_features = 0;
  StandardizationStats stats;
  TargetScaling target;
  SplitSpec split;
  SplitCounts counts;
  Date train_end{};   // last training sample date
  Date test_begin{};  // first test sample date
};

struct PreparedData {
  Preprocessing prep;
  SampleSet all;
  SampleSet train;
  SampleSet val;
  SampleSet test;
};

// Aligned, unstandardized frame holding every channel plus the raw target
// column `realized_vol`.
TimeSeriesFrame BuildFeatureFrame(const DatasetBundle& bundle,
                                  const FeatureConfig& cfg,
                                  const SentimentLexicon& lexicon);

PreparedData PrepareDataset(const DatasetBundle& bundle,
                            const FeatureConfig& cfg, const SplitSpec& split,
                            const SentimentLexicon& lexicon);

// Applies stored preprocessing to (possibly new) data. Returns every
// admissible window; throws InsufficientDataError when there is none.
SampleSet BuildSamples(const DatasetBundle& bundle, const Preprocessing& prep,
                       const SentimentLexicon& lexicon);

// Model dims matching the prepared channels, taking layer sizes from `base`.
HybridDims DimsFor(const Preprocessing& prep, const HybridDims& base = {});

}  // namespace riskcast

#endif  // RISKCAST_PIPELINE_H_
