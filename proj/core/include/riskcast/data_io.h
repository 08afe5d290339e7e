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

#ifndef RISKCAST_DATA_IO_H_
#define RISKCAST_DATA_IO_H_

// CSV ingestion, chronological splitting and the seeded synthetic market.
//
// File schemas (header row required, ISO dates, any row order):
//   market.csv     date,open,close,volume
//   financial.csv  date,profit,debt_ratio,cash_flow
//   macro.csv      date,gdp,cpi,interest_rate
//   news.csv       date,text            (RFC-4180 quoting)
//   policy.csv     date,category

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "riskcast/date.h"
#include "riskcast/features.h"

namespace riskcast {

struct NewsItem {
  Date date;
  std::string text;

  friend bool operator==(const NewsItem&, const NewsItem&) = default;
};

struct DatasetBundle {
  TimeSeriesFrame market;     // open, close, volume
  TimeSeriesFrame financial;  // profit, debt_ratio, cash_flow
  TimeSeriesFrame macro;      // gdp, cpi, interest_rate
  std::vector<NewsItem> news;
  std::vector<PolicyEvent> policy;
  std::string provenance;

  // Every component must overlap the market date range. Throws ContractError.
  void Validate() const;
};

inline constexpr const char* kMarketFile = "market.csv";
inline constexpr const char* kFinancialFile = "financial.csv";
inline constexpr const char* kMacroFile = "macro.csv";
inline constexpr const char* kNewsFile = "news.csv";
inline constexpr const char* kPolicyFile = "policy.csv";

// Numeric loaders sort by date (warning when the file was out of order) and
// reject duplicate dates. Errors carry the file name and line number.
TimeSeriesFrame LoadMarketCsv(const std::filesystem::path& path);
TimeSeriesFrame LoadFinancialCsv(const std::filesystem::path& path);
TimeSeriesFrame LoadMacroCsv(const std::filesystem::path& path);
// Text and event loaders keep file order after a stable sort by date.
std::vector<NewsItem> LoadNewsCsv(const std::filesystem::path& path);
std::vector<PolicyEvent> LoadPolicyCsv(const std::filesystem::path& path);

// Reads the five files above from `dir`.
DatasetBundle LoadBundle(const std::filesystem::path& dir);
// Writes the five files into `dir`, creating it if needed.
void WriteBundle(const DatasetBundle& bundle, const std::filesystem::path& dir);

// Writes `date,<columns...>` for a frame with no missing values.
void WriteFrameCsv(const TimeSeriesFrame& frame, const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Chronological split

struct SplitSpec {
  double train = 0.70;
  double val = 0.15;
  double test = 0.15;

  // Fractions positive and summing to 1 (within 1e-9).
  void Validate() const;
};

struct SplitCounts {
  std::size_t train = 0;
  std::size_t val = 0;
  std::size_t test = 0;
};

// floor(n * fraction) per block; the leftover samples go to the test block.
// Needs n >= 10.
SplitCounts ComputeSplit(std::size_t n, const SplitSpec& spec);

struct SplitSets {
  SampleSet train;
  SampleSet val;
  SampleSet test;
};

// Contiguous blocks in order train, val, test.
SplitSets ChronologicalSplit(const SampleSet& samples, const SplitSpec& spec);

// ---------------------------------------------------------------------------
// Synthetic market
//
// Business-day calendar from `start`. A latent sentiment factor z follows
// AR(1) with coefficient 0.95 and unit stationary variance. Daily news text
// is sampled from the lexicon: each token is a sentiment word with
// probability 0.7, positive with probability sigmoid(2 z), so the expected
// compound score moves with s = tanh(z). The daily volatility shift is
//   m_t = kappa * (0.6 s_t + [nonlinear] 0.55 s_t * trend_t)
// where trend_t = +1 when the close is at or above its 20-day average, else
// -1. The next day's log return is normal with
//   sigma_{t+1} = sigma0 * regime_{t+1} * max(0.05, 1 + m_t)
// and a two-state regime multiplier (1 or 1.3) that flips with
// `regime_shift_prob` per day. Volume scales with the day's absolute return.
// Quarterly financials, monthly macro prints and sparse policy events follow
// mean-reverting random processes that do not feed back into volatility,
// except that rate hikes and cuts move the macro interest rate.

struct SynthConfig {
  std::size_t n_days = 2000;
  std::uint64_t seed = 7;
  double base_volatility = 0.01;     // sigma0, daily
  double regime_shift_prob = 0.01;
  double sentiment_strength = 0.8;   // kappa
  bool nonlinear = true;
  Date start = Date(std::chrono::year{2015} / 1 / 5);

  // n_days >= 200, sigma0 > 0, probabilities in [0, 1], kappa >= 0.
  void Validate() const;
};

inline const std::vector<std::string>& DefaultPolicyVocabulary() {
  static const std::vector<std::string> vocab = {
      "rate_hike", "rate_cut", "regulation_tightening", "regulation_easing"};
  return vocab;
}

DatasetBundle SynthGenerate(const SynthConfig& cfg,
                            const SentimentLexicon& lexicon = SentimentLexicon::Default());

}  // namespace riskcast

#endif  // RISKCAST_DATA_IO_H_
