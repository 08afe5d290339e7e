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

#ifndef RISKCAST_FEATURES_H_
#define RISKCAST_FEATURES_H_

// Feature engineering: causal rolling statistics, lexicon sentiment,
// train-only standardization, policy event encoding, date alignment and
// sliding-window sample construction.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "riskcast/date.h"
#include "riskcast/error.h"
#include "riskcast/tensor.h"

namespace riskcast {

// Raised when a frame is too short to yield a single sample.
class InsufficientDataError : public ContractError {
 public:
  using ContractError::ContractError;
};

// ---------------------------------------------------------------------------
// Frames

struct Column {
  std::string name;
  std::vector<double> values;
  std::vector<bool> missing;  // empty when nothing is missing

  bool is_missing(std::size_t row) const {
    return !missing.empty() && missing[row];
  }
};

// Date-indexed table of named numeric columns. Dates are strictly increasing
// and every column has one entry per date.
class TimeSeriesFrame {
 public:
  TimeSeriesFrame() = default;
  explicit TimeSeriesFrame(std::vector<Date> dates);

  const std::vector<Date>& dates() const { return dates_; }
  std::size_t rows() const { return dates_.size(); }

  void AddColumn(std::string name, std::vector<double> values,
                 std::vector<bool> missing = {});
  void AddColumn(Column column);

  const std::vector<Column>& columns() const { return columns_; }
  bool has_column(std::string_view name) const;
  const Column& column(std::string_view name) const;
  Column& column(std::string_view name);
  std::vector<std::string> column_names() const;

  // Row holding `date`, if any.
  std::optional<std::size_t> RowOf(Date date) const;
  // True when no column is missing a value in `row`.
  bool RowComplete(std::size_t row) const;

 private:
  std::vector<Date> dates_;
  std::vector<Column> columns_;
};

// ---------------------------------------------------------------------------
// Rolling statistics (trailing windows ending at t; the first w-1 entries are
// marked missing). A window longer than the series yields an all-missing
// result and a warning.

struct MaskedSeries {
  std::vector<double> values;
  std::vector<bool> missing;
};

MaskedSeries MovingAverage(std::span<const double> series, std::size_t window);
// Population standard deviation over the trailing window.
MaskedSeries RollingStd(std::span<const double> series, std::size_t window);

// ---------------------------------------------------------------------------
// Sentiment

struct SentimentLexicon {
  std::set<std::string> positive;
  std::set<std::string> negative;

  // Throws ParameterError if the two sets share a term.
  void Validate() const;

  // Built-in finance lexicon (50 positive and 50 negative terms).
  static SentimentLexicon Default();
  // Plain text: `[positive]` / `[negative]` section markers, one term per
  // line, `#` comments and blank lines ignored.
  static SentimentLexicon Parse(std::istream& in);
  static SentimentLexicon Load(const std::filesystem::path& path);
  void Write(std::ostream& out) const;
};

struct SentimentScores {
  double pos = 0.0;
  double neg = 0.0;
  double neu = 1.0;
  double compound = 0.0;
};

// Lowercased alphanumeric tokens.
std::vector<std::string> Tokenize(std::string_view text);

// pos/neg/neu are token fractions; compound = (p - n) / (p + n + 1) on the
// raw match counts. Empty text scores (0, 0, 1, 0).
SentimentScores ScoreSentiment(std::string_view text,
                               const SentimentLexicon& lexicon);

struct DatedSentiment {
  Date date;
  SentimentScores scores;
};

// Per-date mean of each score, one row per calendar date; dates without
// items get (0, 0, 1, 0). Items dated between calendar entries roll forward
// to the next calendar date; items after the last one are dropped. An empty
// calendar uses the distinct item dates. Columns: pos, neg, neu, compound.
TimeSeriesFrame AggregateDailySentiment(std::span<const DatedSentiment> items,
                                        std::span<const Date> calendar);

// ---------------------------------------------------------------------------
// Standardization

struct RowRange {
  std::size_t begin = 0;
  std::size_t end = 0;  // exclusive
};

struct StandardizationStats {
  std::vector<std::string> columns;
  std::vector<double> mean;
  std::vector<double> stddev;          // population
  std::vector<bool> zero_variance;
};

// Fits on the non-missing values of `rows` for the named columns (all columns
// when `columns` is empty). Throws ContractError for an empty range.
StandardizationStats FitStandardize(const TimeSeriesFrame& frame,
                                    RowRange rows,
                                    const std::vector<std::string>& columns = {});
// z = (x - mean) / std; zero-variance columns map to 0. Columns absent from
// `stats` pass through unchanged.
TimeSeriesFrame ApplyStandardize(const TimeSeriesFrame& frame,
                                 const StandardizationStats& stats);

// ---------------------------------------------------------------------------
// Policy events

struct PolicyEvent {
  Date date;
  std::string category;
};

// Multi-hot rows over `vocabulary`, columns named "policy_<category>".
// Calendar handling matches AggregateDailySentiment. Unknown categories raise
// SchemaError naming the category and date.
TimeSeriesFrame OneHotEncode(std::span<const PolicyEvent> events,
                             const std::vector<std::string>& vocabulary,
                             std::span<const Date> calendar);

// ---------------------------------------------------------------------------
// Alignment

enum class FillRule {
  kExact,        // value must exist on the date, else the row is dropped
  kForwardFill,  // last observation on or before the date
  kConstant,     // gap filled from `fill_values` (one per column)
};

struct AlignSource {
  const TimeSeriesFrame* frame = nullptr;
  FillRule fill = FillRule::kExact;
  std::vector<double> fill_values;
};

// Joins every source onto the dates of sources[0]. Rows where any source
// still lacks a value are dropped. Throws ContractError when nothing
// survives (the message lists each source's date range).
TimeSeriesFrame AlignByDate(std::span<const AlignSource> sources);

// ---------------------------------------------------------------------------
// Samples

// Aligned windowed samples. Sample i uses rows [t-T+1, t] for `seq`, row t
// for `stat`, and target row t+horizon for `y`, where t is its end row.
struct SampleSet {
  std::vector<Tensor> seq;    // [T x F_seq]
  std::vector<Tensor> stat;   // [F_static]
  std::vector<double> y;
  std::vector<Date> sample_dates;  // last row of the input window
  std::vector<Date> target_dates;  // row the target is read from

  std::size_t size() const { return y.size(); }
  bool empty() const { return y.empty(); }
  // Contiguous slice [begin, end).
  SampleSet Slice(std::size_t begin, std::size_t end) const;
  // Throws ContractError on unequal member counts.
  void Validate() const;
};

// Stride-1 sliding windows. Throws InsufficientDataError when
// rows < T + horizon.
SampleSet BuildWindows(const TimeSeriesFrame& aligned,
                       const std::vector<std::string>& seq_cols,
                       const std::vector<std::string>& static_cols,
                       const std::string& target_col, std::size_t window,
                       std::size_t horizon);

}  // namespace riskcast

#endif  // RISKCAST_FEATURES_H_
