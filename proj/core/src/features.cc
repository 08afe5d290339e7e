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

#include "riskcast/features.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "riskcast/log.h"

namespace riskcast {

// ---------------------------------------------------------------------------
// TimeSeriesFrame

TimeSeriesFrame::TimeSeriesFrame(std::vector<Date> dates)
    : dates_(std::move(dates)) {
  for (std::size_t i = 1; i < dates_.size(); ++i) {
    if (!(dates_[i - 1] < dates_[i])) {
      throw ContractError("frame dates must be strictly increasing; " +
                          FormatDate(dates_[i - 1]) + " is followed by " +
                          FormatDate(dates_[i]));
    }
  }
}

void TimeSeriesFrame::AddColumn(std::string name, std::vector<double> values,
                                std::vector<bool> missing) {
  AddColumn(Column{std::move(name), std::move(values), std::move(missing)});
}

void TimeSeriesFrame::AddColumn(Column column) {
  if (column.values.size() != dates_.size()) {
    throw DimensionError("column '" + column.name + "' has " +
                         std::to_string(column.values.size()) +
                         " values for " + std::to_string(dates_.size()) +
                         " dates");
  }
  if (!column.missing.empty() && column.missing.size() != dates_.size()) {
    throw DimensionError("missing mask of column '" + column.name +
                         "' has the wrong length");
  }
  if (has_column(column.name)) {
    throw ContractError("duplicate column '" + column.name + "'");
  }
  if (std::none_of(column.missing.begin(), column.missing.end(),
                   [](bool m) { return m; })) {
    column.missing.clear();
  }
  columns_.push_back(std::move(column));
}

bool TimeSeriesFrame::has_column(std::string_view name) const {
  return std::any_of(columns_.begin(), columns_.end(),
                     [&](const Column& c) { return c.name == name; });
}

const Column& TimeSeriesFrame::column(std::string_view name) const {
  for (const Column& c : columns_) {
    if (c.name == name) return c;
  }
  throw ContractError("no column named '" + std::string(name) + "'");
}

Column& TimeSeriesFrame::column(std::string_view name) {
  return const_cast<Column&>(std::as_const(*this).column(name));
}

std::vector<std::string> TimeSeriesFrame::column_names() const {
  std::vector<std::string> names;
  names.reserve(columns_.size());
  for (const Column& c : columns_) names.push_back(c.name);
  return names;
}

std::optional<std::size_t> TimeSeriesFrame::RowOf(Date date) const {
  auto it = std::lower_bound(dates_.begin(), dates_.end(), date);
  if (it == dates_.end() || *it != date) return std::nullopt;
  return static_cast<std::size_t>(it - dates_.begin());
}

bool TimeSeriesFrame::RowComplete(std::size_t row) const {
  return std::none_of(columns_.begin(), columns_.end(),
                      [&](const Column& c) { return c.is_missing(row); });
}

// ---------------------------------------------------------------------------
// Rolling statistics

namespace {

template <typename WindowFn>
MaskedSeries Rolling(std::span<const double> series, std::size_t window,
                     const char* what, WindowFn fn) {
  if (window == 0) throw ParameterError(std::string(what) + " window must be >= 1");
  if (series.empty()) throw ContractError(std::string(what) + " of an empty series");
  MaskedSeries out{std::vector<double>(series.size(), 0.0),
                   std::vector<bool>(series.size(), true)};
  if (window > series.size()) {
    Warn(std::string(what) + " window " + std::to_string(window) +
         " exceeds series length " + std::to_string(series.size()) +
         "; every entry is missing");
    return out;
  }
  for (std::size_t t = window - 1; t < series.size(); ++t) {
    out.values[t] = fn(series.subspan(t + 1 - window, window));
    out.missing[t] = false;
  }
  return out;
}

double Mean(std::span<const double> v) {
  double sum = 0.0;
  for (double x : v) sum += x;
  return sum / static_cast<double>(v.size());
}

double PopulationStd(std::span<const double> v) {
  const double mean = Mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size()));
}

}  // namespace

MaskedSeries MovingAverage(std::span<const double> series, std::size_t window) {
  return Rolling(series, window, "moving average", Mean);
}

MaskedSeries RollingStd(std::span<const double> series, std::size_t window) {
  return Rolling(series, window, "rolling std", PopulationStd);
}

// ---------------------------------------------------------------------------
// Sentiment

void SentimentLexicon::Validate() const {
  for (const std::string& term : positive) {
    if (negative.count(term)) {
      throw ParameterError("lexicon term '" + term +
                           "' is both positive and negative");
    }
  }
}

SentimentLexicon SentimentLexicon::Default() {
  SentimentLexicon lex;
  lex.positive = {
      "gain",       "gains",     "growth",     "profit",     "profits",
      "rally",      "rallies",   "surge",      "surges",     "beat",
      "beats",      "upgrade",   "upgraded",   "strong",     "stronger",
      "record",     "boom",      "bullish",    "optimism",   "optimistic",
      "recovery",   "rebound",   "expansion",  "outperform", "robust",
      "soar",       "soars",     "jump",       "jumps",      "rise",
      "rises",      "improve",   "improved",   "positive",   "dividend",
      "upbeat",     "confidence", "stable",    "stability",  "success",
      "successful", "win",       "wins",       "breakthrough", "accelerate",
      "advance",    "advances",  "healthy",    "resilient",  "momentum"};
  lex.negative = {
      "loss",      "losses",      "decline",   "declines",  "crash",
      "crashes",   "fall",        "falls",     "plunge",    "plunges",
      "slump",     "downgrade",   "downgraded", "weak",     "weaker",
      "bearish",   "fear",        "fears",     "panic",     "recession",
      "default",   "defaults",    "bankruptcy", "fraud",    "lawsuit",
      "risk",      "risks",       "volatile",  "volatility", "crisis",
      "selloff",   "slowdown",    "deficit",   "debt",      "layoffs",
      "miss",      "misses",      "warning",   "warns",     "concern",
      "concerns",  "uncertainty", "negative",  "tumble",    "tumbles",
      "sink",      "sinks",       "turmoil",   "inflation", "contagion"};
  return lex;
}

SentimentLexicon SentimentLexicon::Parse(std::istream& in) {
  SentimentLexicon lex;
  std::set<std::string>* section = nullptr;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    auto last = line.find_last_not_of(" \t\r");
    std::string term = line.substr(first, last - first + 1);
    if (term == "[positive]") {
      section = &lex.positive;
    } else if (term == "[negative]") {
      section = &lex.negative;
    } else if (!section) {
      throw SchemaError("lexicon line " + std::to_string(line_no) +
                        ": term before any [positive]/[negative] section");
    } else {
      std::transform(term.begin(), term.end(), term.begin(), [](unsigned char c) {
        return static_cast<char>(std::tolower(c));
      });
      section->insert(std::move(term));
    }
  }
  lex.Validate();
  return lex;
}

SentimentLexicon SentimentLexicon::Load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open lexicon '" + path.string() + "'");
  return Parse(in);
}

void SentimentLexicon::Write(std::ostream& out) const {
  out << "[positive]\n";
  for (const auto& t : positive) out << t << "\n";
  out << "[negative]\n";
  for (const auto& t : negative) out << t << "\n";
}

std::vector<std::string> Tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (unsigned char c : text) {
    if (std::isalnum(c)) {
      current.push_back(static_cast<char>(std::tolower(c)));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

SentimentScores ScoreSentiment(std::string_view text,
                               const SentimentLexicon& lexicon) {
  const auto tokens = Tokenize(text);
  if (tokens.empty()) return {};
  std::size_t n_pos = 0, n_neg = 0;
  for (const auto& t : tokens) {
    if (lexicon.positive.count(t)) {
      ++n_pos;
    } else if (lexicon.negative.count(t)) {
      ++n_neg;
    }
  }
  const double total = static_cast<double>(tokens.size());
  SentimentScores s;
  s.pos = static_cast<double>(n_pos) / total;
  s.neg = static_cast<double>(n_neg) / total;
  // Complement rather than a third division, so the fractions sum to 1.0
  // exactly in floating point.
  s.neu = 1.0 - (s.pos + s.neg);
  s.compound = (static_cast<double>(n_pos) - static_cast<double>(n_neg)) /
               static_cast<double>(n_pos + n_neg + 1);
  return s;
}

namespace {

// Calendar row each dated item belongs to: the first calendar date on or
// after it. Returns calendar.size() for items past the end.
std::size_t CalendarSlot(std::span<const Date> calendar, Date date) {
  return static_cast<std::size_t>(
      std::lower_bound(calendar.begin(), calendar.end(), date) -
      calendar.begin());
}

template <typename Item>
std::vector<Date> CalendarOrItemDates(std::span<const Date> calendar,
                                      std::span<const Item> items) {
  if (!calendar.empty()) return {calendar.begin(), calendar.end()};
  std::vector<Date> dates;
  for (const auto& it : items) dates.push_back(it.date);
  std::sort(dates.begin(), dates.end());
  dates.erase(std::unique(dates.begin(), dates.end()), dates.end());
  return dates;
}

}  // namespace

TimeSeriesFrame AggregateDailySentiment(std::span<const DatedSentiment> items,
                                        std::span<const Date> calendar) {
  std::vector<Date> dates = CalendarOrItemDates(calendar, items);
  const std::size_t n = dates.size();
  std::vector<double> pos(n, 0.0), neg(n, 0.0), neu(n, 0.0), comp(n, 0.0);
  std::vector<std::size_t> count(n, 0);
  for (const auto& item : items) {
    const std::size_t slot = CalendarSlot(dates, item.date);
    if (slot == n) continue;
    pos[slot] += item.scores.pos;
    neg[slot] += item.scores.neg;
    neu[slot] += item.scores.neu;
    comp[slot] += item.scores.compound;
    ++count[slot];
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (count[i] == 0) {
      neu[i] = 1.0;
      continue;
    }
    const double k = static_cast<double>(count[i]);
    pos[i] /= k;
    neg[i] /= k;
    neu[i] /= k;
    comp[i] /= k;
  }
  TimeSeriesFrame frame(std::move(dates));
  frame.AddColumn("pos", std::move(pos));
  frame.AddColumn("neg", std::move(neg));
  frame.AddColumn("neu", std::move(neu));
  frame.AddColumn("compound", std::move(comp));
  return frame;
}

// ---------------------------------------------------------------------------
// Standardization

StandardizationStats FitStandardize(const TimeSeriesFrame& frame,
                                    RowRange rows,
                                    const std::vector<std::string>& columns) {
  if (rows.begin >= rows.end || rows.end > frame.rows()) {
    throw ContractError("standardization needs a nonempty training row range "
                        "inside the frame; got [" +
                        std::to_string(rows.begin) + ", " +
                        std::to_string(rows.end) + ") of " +
                        std::to_string(frame.rows()));
  }
  StandardizationStats stats;
  stats.columns = columns.empty() ? frame.column_names() : columns;
  for (const std::string& name : stats.columns) {
    const Column& col = frame.column(name);
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t r = rows.begin; r < rows.end; ++r) {
      if (col.is_missing(r)) continue;
      sum += col.values[r];
      ++n;
    }
    if (n == 0) {
      throw ContractError("column '" + name +
                          "' has no observed values in the training rows");
    }
    const double mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t r = rows.begin; r < rows.end; ++r) {
      if (col.is_missing(r)) continue;
      ss += (col.values[r] - mean) * (col.values[r] - mean);
    }
    const double sd = std::sqrt(ss / static_cast<double>(n));
    stats.mean.push_back(mean);
    stats.stddev.push_back(sd);
    stats.zero_variance.push_back(sd <= 1e-12 * std::max(1.0, std::abs(mean)));
  }
  return stats;
}

TimeSeriesFrame ApplyStandardize(const TimeSeriesFrame& frame,
                                 const StandardizationStats& stats) {
  TimeSeriesFrame out(frame.dates());
  for (const Column& col : frame.columns()) {
    auto it = std::find(stats.columns.begin(), stats.columns.end(), col.name);
    if (it == stats.columns.end()) {
      out.AddColumn(col);
      continue;
    }
    const std::size_t k = static_cast<std::size_t>(it - stats.columns.begin());
    Column z = col;
    for (std::size_t r = 0; r < z.values.size(); ++r) {
      if (z.is_missing(r)) continue;
      z.values[r] = stats.zero_variance[k]
                        ? 0.0
                        : (z.values[r] - stats.mean[k]) / stats.stddev[k];
    }
    out.AddColumn(std::move(z));
  }
  return out;
}

// ---------------------------------------------------------------------------
// One-hot policy events

TimeSeriesFrame OneHotEncode(std::span<const PolicyEvent> events,
                             const std::vector<std::string>& vocabulary,
                             std::span<const Date> calendar) {
  if (vocabulary.empty()) throw ParameterError("policy vocabulary is empty");
  std::vector<Date> dates = CalendarOrItemDates(calendar, events);
  std::vector<std::vector<double>> cols(vocabulary.size(),
                                        std::vector<double>(dates.size(), 0.0));
  for (const auto& ev : events) {
    auto it = std::find(vocabulary.begin(), vocabulary.end(), ev.category);
    if (it == vocabulary.end()) {
      throw SchemaError("unknown policy category '" + ev.category + "' on " +
                        FormatDate(ev.date));
    }
    const std::size_t slot = CalendarSlot(dates, ev.date);
    if (slot == dates.size()) continue;
    cols[static_cast<std::size_t>(it - vocabulary.begin())][slot] = 1.0;
  }
  TimeSeriesFrame frame(std::move(dates));
  for (std::size_t k = 0; k < vocabulary.size(); ++k) {
    frame.AddColumn("policy_" + vocabulary[k], std::move(cols[k]));
  }
  return frame;
}

// ---------------------------------------------------------------------------
// Alignment

namespace {

std::string DateRange(const TimeSeriesFrame& f) {
  if (f.rows() == 0) return "(empty)";
  return FormatDate(f.dates().front()) + ".." + FormatDate(f.dates().back());
}

}  // namespace

TimeSeriesFrame AlignByDate(std::span<const AlignSource> sources) {
  if (sources.empty() || !sources[0].frame) {
    throw ContractError("alignment needs at least one frame");
  }
  const std::vector<Date>& dates = sources[0].frame->dates();
  const std::size_t n = dates.size();
  std::vector<bool> keep(n, true);
  std::vector<Column> out_cols;

  for (std::size_t s = 0; s < sources.size(); ++s) {
    const AlignSource& src = sources[s];
    if (!src.frame) throw ContractError("alignment source is null");
    const TimeSeriesFrame& f = *src.frame;
    const FillRule rule = s == 0 ? FillRule::kExact : src.fill;
    if (rule == FillRule::kConstant &&
        src.fill_values.size() != f.columns().size()) {
      throw ParameterError("constant fill needs one value per column");
    }
    for (std::size_t c = 0; c < f.columns().size(); ++c) {
      const Column& col = f.columns()[c];
      Column out{col.name, std::vector<double>(n, 0.0), {}};
      std::size_t src_row = 0;
      std::optional<double> last;
      for (std::size_t r = 0; r < n; ++r) {
        // Advance through source rows dated on or before dates[r].
        std::optional<double> exact;
        while (src_row < f.rows() && f.dates()[src_row] <= dates[r]) {
          if (!col.is_missing(src_row)) {
            last = col.values[src_row];
            if (f.dates()[src_row] == dates[r]) exact = col.values[src_row];
          }
          ++src_row;
        }
        switch (rule) {
          case FillRule::kExact:
            if (exact) out.values[r] = *exact; else keep[r] = false;
            break;
          case FillRule::kForwardFill:
            if (last) out.values[r] = *last; else keep[r] = false;
            break;
          case FillRule::kConstant:
            out.values[r] = exact ? *exact : src.fill_values[c];
            break;
        }
      }
      out_cols.push_back(std::move(out));
    }
  }

  std::vector<Date> kept_dates;
  for (std::size_t r = 0; r < n; ++r) {
    if (keep[r]) kept_dates.push_back(dates[r]);
  }
  if (kept_dates.empty()) {
    std::ostringstream msg;
    msg << "alignment produced no rows; source date ranges:";
    for (std::size_t s = 0; s < sources.size(); ++s) {
      msg << " [" << s << "] " << DateRange(*sources[s].frame);
    }
    throw ContractError(msg.str());
  }
  TimeSeriesFrame aligned(std::move(kept_dates));
  for (Column& col : out_cols) {
    std::vector<double> values;
    values.reserve(aligned.rows());
    for (std::size_t r = 0; r < n; ++r) {
      if (keep[r]) values.push_back(col.values[r]);
    }
    aligned.AddColumn(std::move(col.name), std::move(values));
  }
  return aligned;
}

// ---------------------------------------------------------------------------
// Samples

SampleSet SampleSet::Slice(std::size_t begin, std::size_t end) const {
  if (begin > end || end > size()) {
    throw ContractError("sample slice [" + std::to_string(begin) + ", " +
                        std::to_string(end) + ") out of range " +
                        std::to_string(size()));
  }
  SampleSet out;
  out.seq.assign(seq.begin() + begin, seq.begin() + end);
  out.stat.assign(stat.begin() + begin, stat.begin() + end);
  out.y.assign(y.begin() + begin, y.begin() + end);
  out.sample_dates.assign(sample_dates.begin() + begin, sample_dates.begin() + end);
  out.target_dates.assign(target_dates.begin() + begin, target_dates.begin() + end);
  return out;
}

void SampleSet::Validate() const {
  const std::size_t n = y.size();
  if (seq.size() != n || stat.size() != n || sample_dates.size() != n ||
      target_dates.size() != n) {
    throw ContractError("sample set members have unequal counts");
  }
}

SampleSet BuildWindows(const TimeSeriesFrame& aligned,
                       const std::vector<std::string>& seq_cols,
                       const std::vector<std::string>& static_cols,
                       const std::string& target_col, std::size_t window,
                       std::size_t horizon) {
  if (window == 0 || horizon == 0) {
    throw ParameterError("window and horizon must be >= 1");
  }
  if (seq_cols.empty() || static_cols.empty()) {
    throw ParameterError("windows need at least one sequence and one static column");
  }
  const std::size_t rows = aligned.rows();
  if (rows < window + horizon) {
    throw InsufficientDataError(
        "insufficient data: " + std::to_string(rows) + " rows, need at least " +
        std::to_string(window + horizon) + " (window " + std::to_string(window) +
        " + horizon " + std::to_string(horizon) + ")");
  }
  std::vector<const Column*> seq, stat;
  for (const auto& name : seq_cols) seq.push_back(&aligned.column(name));
  for (const auto& name : static_cols) stat.push_back(&aligned.column(name));
  const Column& target = aligned.column(target_col);

  auto value = [](const Column& c, std::size_t r) {
    if (c.is_missing(r)) {
      throw ContractError("column '" + c.name + "' is missing row " +
                          std::to_string(r) + " inside a sample window");
    }
    return c.values[r];
  };

  SampleSet set;
  const std::size_t count = rows - window - horizon + 1;
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t end = i + window - 1;
    Tensor x({window, seq.size()});
    for (std::size_t r = 0; r < window; ++r) {
      for (std::size_t c = 0; c < seq.size(); ++c) {
        x(r, c) = value(*seq[c], i + r);
      }
    }
    Tensor s({stat.size()});
    for (std::size_t c = 0; c < stat.size(); ++c) s[c] = value(*stat[c], end);
    set.seq.push_back(std::move(x));
    set.stat.push_back(std::move(s));
    set.y.push_back(value(target, end + horizon));
    set.sample_dates.push_back(aligned.dates()[end]);
    set.target_dates.push_back(aligned.dates()[end + horizon]);
  }
  return set;
}

}  // namespace riskcast
