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

#include "riskcast/data_io.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "riskcast/csv.h"
#include "riskcast/error.h"
#include "riskcast/log.h"
#include "riskcast/rng.h"

namespace riskcast {
namespace {

struct DatedRow {
  Date date;
  std::vector<double> values;
  std::size_t line;
};

std::string Where(const std::filesystem::path& path, std::size_t line) {
  return path.string() + ":" + std::to_string(line);
}

Date ParseDateAt(const std::string& text, const std::filesystem::path& path,
                 std::size_t line) {
  try {
    return ParseDate(text);
  } catch (const SchemaError& e) {
    throw SchemaError(Where(path, line) + ": " + e.what());
  }
}

// Sorts rows by date, warning if the file was unsorted, and rejects
// duplicate dates.
template <typename Row>
void SortByDate(std::vector<Row>& rows, const std::filesystem::path& path,
                bool allow_duplicates) {
  const bool sorted = std::is_sorted(
      rows.begin(), rows.end(),
      [](const Row& a, const Row& b) { return a.date < b.date; });
  if (!sorted) {
    Warn(path.string() + ": rows are not in date order; sorted ascending");
    std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
      return a.date < b.date;
    });
  }
  if (allow_duplicates) return;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].date == rows[i - 1].date) {
      throw SchemaError(Where(path, rows[i].line) + ": duplicate date " +
                        FormatDate(rows[i].date) + " (also on line " +
                        std::to_string(rows[i - 1].line) + ")");
    }
  }
}

TimeSeriesFrame LoadNumericFrame(const std::filesystem::path& path,
                                 const std::vector<std::string>& columns) {
  const CsvTable table = ReadCsvFile(path);
  const std::string source = path.string();
  const std::size_t date_col = table.RequireColumn("date", source);
  std::vector<std::size_t> idx;
  for (const auto& c : columns) idx.push_back(table.RequireColumn(c, source));

  std::vector<DatedRow> rows;
  rows.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& fields = table.rows[r];
    const std::size_t line = table.line_numbers[r];
    DatedRow row{ParseDateAt(fields[date_col], path, line), {}, line};
    for (std::size_t k = 0; k < idx.size(); ++k) {
      double v = 0.0;
      if (!ParseDouble(fields[idx[k]], v) || !std::isfinite(v)) {
        throw SchemaError(Where(path, line) + ": bad value '" + fields[idx[k]] +
                          "' in column '" + columns[k] + "'");
      }
      row.values.push_back(v);
    }
    rows.push_back(std::move(row));
  }
  SortByDate(rows, path, /*allow_duplicates=*/false);

  std::vector<Date> dates;
  for (const auto& r : rows) dates.push_back(r.date);
  TimeSeriesFrame frame(std::move(dates));
  for (std::size_t k = 0; k < columns.size(); ++k) {
    std::vector<double> values;
    values.reserve(rows.size());
    for (const auto& r : rows) values.push_back(r.values[k]);
    frame.AddColumn(columns[k], std::move(values));
  }
  return frame;
}

std::ofstream OpenForWrite(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

void CheckWritten(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace

void DatasetBundle::Validate() const {
  if (market.rows() == 0) throw ContractError("dataset has no market rows");
  const Date lo = market.dates().front(), hi = market.dates().back();
  auto overlaps = [&](Date first, Date last) { return first <= hi && last >= lo; };
  auto check = [&](const TimeSeriesFrame& f, const char* name) {
    if (f.rows() == 0 || !overlaps(f.dates().front(), f.dates().back())) {
      throw ContractError(std::string(name) +
                          " data does not overlap the market date range " +
                          FormatDate(lo) + ".." + FormatDate(hi));
    }
  };
  check(financial, "financial");
  check(macro, "macro");
  if (news.empty() || !overlaps(news.front().date, news.back().date)) {
    throw ContractError("news data does not overlap the market date range");
  }
  // Policy events are optional: a quiet period is legitimate.
}

TimeSeriesFrame LoadMarketCsv(const std::filesystem::path& path) {
  return LoadNumericFrame(path, {"open", "close", "volume"});
}

TimeSeriesFrame LoadFinancialCsv(const std::filesystem::path& path) {
  return LoadNumericFrame(path, {"profit", "debt_ratio", "cash_flow"});
}

TimeSeriesFrame LoadMacroCsv(const std::filesystem::path& path) {
  return LoadNumericFrame(path, {"gdp", "cpi", "interest_rate"});
}

std::vector<NewsItem> LoadNewsCsv(const std::filesystem::path& path) {
  const CsvTable table = ReadCsvFile(path);
  const std::size_t date_col = table.RequireColumn("date", path.string());
  const std::size_t text_col = table.RequireColumn("text", path.string());
  struct Row {
    Date date;
    std::string text;
    std::size_t line;
  };
  std::vector<Row> rows;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const std::size_t line = table.line_numbers[r];
    rows.push_back({ParseDateAt(table.rows[r][date_col], path, line),
                    table.rows[r][text_col], line});
  }
  SortByDate(rows, path, /*allow_duplicates=*/true);
  std::vector<NewsItem> items;
  items.reserve(rows.size());
  for (auto& r : rows) items.push_back({r.date, std::move(r.text)});
  return items;
}

std::vector<PolicyEvent> LoadPolicyCsv(const std::filesystem::path& path) {
  const CsvTable table = ReadCsvFile(path);
  const std::size_t date_col = table.RequireColumn("date", path.string());
  const std::size_t cat_col = table.RequireColumn("category", path.string());
  struct Row {
    Date date;
    std::string category;
    std::size_t line;
  };
  std::vector<Row> rows;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const std::size_t line = table.line_numbers[r];
    rows.push_back({ParseDateAt(table.rows[r][date_col], path, line),
                    table.rows[r][cat_col], line});
  }
  SortByDate(rows, path, /*allow_duplicates=*/true);
  std::vector<PolicyEvent> events;
  events.reserve(rows.size());
  for (auto& r : rows) events.push_back({r.date, std::move(r.category)});
  return events;
}

DatasetBundle LoadBundle(const std::filesystem::path& dir) {
  DatasetBundle b;
  b.market = LoadMarketCsv(dir / kMarketFile);
  b.financial = LoadFinancialCsv(dir / kFinancialFile);
  b.macro = LoadMacroCsv(dir / kMacroFile);
  b.news = LoadNewsCsv(dir / kNewsFile);
  b.policy = LoadPolicyCsv(dir / kPolicyFile);
  b.provenance = "csv:" + dir.string();
  return b;
}

void WriteFrameCsv(const TimeSeriesFrame& frame,
                   const std::filesystem::path& path) {
  std::ofstream out = OpenForWrite(path);
  std::vector<std::string> header{"date"};
  for (const auto& name : frame.column_names()) header.push_back(name);
  WriteCsvRow(out, header);
  for (std::size_t r = 0; r < frame.rows(); ++r) {
    std::vector<std::string> fields{FormatDate(frame.dates()[r])};
    for (const Column& c : frame.columns()) {
      if (c.is_missing(r)) {
        throw ContractError("cannot write missing value in column '" + c.name + "'");
      }
      fields.push_back(FormatDouble(c.values[r]));
    }
    WriteCsvRow(out, fields);
  }
  CheckWritten(out, path);
}

void WriteBundle(const DatasetBundle& bundle, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw IoError("cannot create directory '" + dir.string() + "': " + ec.message());
  }
  WriteFrameCsv(bundle.market, dir / kMarketFile);
  WriteFrameCsv(bundle.financial, dir / kFinancialFile);
  WriteFrameCsv(bundle.macro, dir / kMacroFile);
  {
    const auto path = dir / kNewsFile;
    std::ofstream out = OpenForWrite(path);
    WriteCsvRow(out, {"date", "text"});
    for (const auto& n : bundle.news) WriteCsvRow(out, {FormatDate(n.date), n.text});
    CheckWritten(out, path);
  }
  {
    const auto path = dir / kPolicyFile;
    std::ofstream out = OpenForWrite(path);
    WriteCsvRow(out, {"date", "category"});
    for (const auto& p : bundle.policy) {
      WriteCsvRow(out, {FormatDate(p.date), p.category});
    }
    CheckWritten(out, path);
  }
}

// ---------------------------------------------------------------------------
// Split

void SplitSpec::Validate() const {
  if (!(train > 0.0 && val > 0.0 && test > 0.0) ||
      std::abs(train + val + test - 1.0) > 1e-9) {
    throw ParameterError("split fractions must be positive and sum to 1");
  }
}

SplitCounts ComputeSplit(std::size_t n, const SplitSpec& spec) {
  spec.Validate();
  if (n < 10) {
    throw ContractError("chronological split needs at least 10 samples, got " +
                        std::to_string(n));
  }
  // The nudge keeps exact products such as 100 * 0.7 from flooring low.
  auto floor_of = [n](double f) {
    return static_cast<std::size_t>(std::floor(static_cast<double>(n) * f + 1e-9));
  };
  SplitCounts c{floor_of(spec.train), floor_of(spec.val), floor_of(spec.test)};
  c.test += n - (c.train + c.val + c.test);
  if (c.train == 0 || c.val == 0 || c.test == 0) {
    throw ContractError("split leaves an empty block for " + std::to_string(n) +
                        " samples");
  }
  return c;
}

SplitSets ChronologicalSplit(const SampleSet& samples, const SplitSpec& spec) {
  samples.Validate();
  const SplitCounts c = ComputeSplit(samples.size(), spec);
  return SplitSets{samples.Slice(0, c.train),
                   samples.Slice(c.train, c.train + c.val),
                   samples.Slice(c.train + c.val, samples.size())};
}

// ---------------------------------------------------------------------------
// Synthetic generator

void SynthConfig::Validate() const {
  if (n_days < 200) {
    throw ParameterError("synthetic data needs n_days >= 200, got " +
                         std::to_string(n_days));
  }
  if (!(base_volatility > 0.0)) throw ParameterError("base volatility must be > 0");
  if (!(regime_shift_prob >= 0.0 && regime_shift_prob <= 1.0)) {
    throw ParameterError("regime shift probability must lie in [0, 1]");
  }
  if (!(sentiment_strength >= 0.0) || !std::isfinite(sentiment_strength)) {
    throw ParameterError("sentiment strength must be finite and >= 0");
  }
}

namespace {

enum Stream : std::uint64_t {
  kLatent = 11,
  kRegime = 12,
  kReturns = 13,
  kNews = 14,
  kFundamentals = 15,
  kPolicy = 16,
};

constexpr double kSentimentPersistence = 0.95;
constexpr double kLinearLoading = 0.6;
constexpr double kInteractionLoading = 0.55;
constexpr double kStressedMultiplier = 1.3;
constexpr double kSentimentTokenRate = 0.7;
constexpr double kMinVolMultiplier = 0.05;
constexpr double kPolicyEventRate = 0.01;

const std::vector<std::string>& FillerWords() {
  static const std::vector<std::string> words = {
      "market",  "shares",  "company",  "report", "today",   "analysts",
      "trading", "investors", "quarter", "sector", "index",  "stocks",
      "bank",    "officials", "says",    "update", "week",   "session",
      "outlook", "data",    "earnings", "central", "board",  "traders"};
  return words;
}

std::vector<Date> BusinessDays(Date start, std::size_t n) {
  std::vector<Date> days;
  days.reserve(n);
  for (Date d = start; days.size() < n; d += std::chrono::days{1}) {
    const std::chrono::weekday wd{d};
    if (wd != std::chrono::Saturday && wd != std::chrono::Sunday) days.push_back(d);
  }
  return days;
}

unsigned MonthOf(Date d) {
  return static_cast<unsigned>(std::chrono::year_month_day{d}.month());
}

double Sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

DatasetBundle SynthGenerate(const SynthConfig& cfg, const SentimentLexicon& lexicon) {
  cfg.Validate();
  lexicon.Validate();
  if (lexicon.positive.empty() || lexicon.negative.empty()) {
    throw ParameterError("synthetic news needs positive and negative lexicon terms");
  }
  const SeededRng root(cfg.seed);
  SeededRng latent_rng = root.Split(kLatent), regime_rng = root.Split(kRegime),
            return_rng = root.Split(kReturns), news_rng = root.Split(kNews),
            fund_rng = root.Split(kFundamentals), policy_rng = root.Split(kPolicy);

  const std::size_t n = cfg.n_days;
  const std::vector<Date> days = BusinessDays(cfg.start, n);
  const std::vector<std::string> pos_words(lexicon.positive.begin(),
                                           lexicon.positive.end());
  const std::vector<std::string> neg_words(lexicon.negative.begin(),
                                           lexicon.negative.end());
  const auto& filler = FillerWords();

  DatasetBundle b;
  b.provenance = "synthetic seed=" + std::to_string(cfg.seed) +
                 " days=" + std::to_string(n);

  // Latent sentiment and the news it drives.
  std::vector<double> z(n);
  z[0] = latent_rng.Normal(0.0, 1.0);
  const double innovation = std::sqrt(1.0 - kSentimentPersistence * kSentimentPersistence);
  for (std::size_t t = 1; t < n; ++t) {
    z[t] = kSentimentPersistence * z[t - 1] + latent_rng.Normal(0.0, innovation);
  }
  for (std::size_t t = 0; t < n; ++t) {
    const double p_positive = Sigmoid(2.0 * z[t]);
    const std::size_t items = 2 + news_rng.Below(3);
    for (std::size_t k = 0; k < items; ++k) {
      const std::size_t tokens = 10 + news_rng.Below(6);
      std::string text;
      for (std::size_t w = 0; w < tokens; ++w) {
        const std::string* word;
        if (news_rng.Uniform01() < kSentimentTokenRate) {
          word = news_rng.Uniform01() < p_positive
                     ? &pos_words[news_rng.Below(pos_words.size())]
                     : &neg_words[news_rng.Below(neg_words.size())];
        } else {
          word = &filler[news_rng.Below(filler.size())];
        }
        if (w) text += (w == tokens / 2) ? ", " : " ";
        text += *word;
      }
      text[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(text[0])));
      b.news.push_back({days[t], std::move(text)});
    }
  }

  // Prices.
  std::vector<double> open(n), close(n), volume(n);
  open[0] = close[0] = 100.0;
  volume[0] = 1e6;
  bool stressed = false;
  double close_sum = 0.0;  // running sum for the 20-day average
  for (std::size_t t = 0; t + 1 < n; ++t) {
    close_sum += close[t];
    if (t >= 20) close_sum -= close[t - 20];
    const double ma20 = close_sum / static_cast<double>(std::min<std::size_t>(t + 1, 20));
    const double trend = close[t] >= ma20 ? 1.0 : -1.0;
    // tanh(z) tracks the expected compound score of the day's news.
    const double s = std::tanh(z[t]);
    double shift = kLinearLoading * s;
    if (cfg.nonlinear) shift += kInteractionLoading * s * trend;
    shift *= cfg.sentiment_strength;

    if (regime_rng.Uniform01() < cfg.regime_shift_prob) stressed = !stressed;
    const double sigma = cfg.base_volatility *
                         (stressed ? kStressedMultiplier : 1.0) *
                         std::max(kMinVolMultiplier, 1.0 + shift);
    const double ret = -0.5 * sigma * sigma + sigma * return_rng.Normal(0.0, 1.0);
    open[t + 1] = close[t] * std::exp(0.3 * sigma * return_rng.Normal(0.0, 1.0));
    close[t + 1] = close[t] * std::exp(ret);
    volume[t + 1] = 1e6 * std::exp(0.3 * return_rng.Normal(0.0, 1.0)) *
                    (0.5 + 0.5 * std::abs(ret) / cfg.base_volatility);
  }
  b.market = TimeSeriesFrame(days);
  b.market.AddColumn("open", std::move(open));
  b.market.AddColumn("close", std::move(close));
  b.market.AddColumn("volume", std::move(volume));

  // Policy events; rate moves feed the macro interest rate below.
  std::vector<double> rate_moves(n, 0.0);
  const auto& vocab = DefaultPolicyVocabulary();
  for (std::size_t t = 0; t < n; ++t) {
    if (policy_rng.Uniform01() >= kPolicyEventRate) continue;
    const std::string& category = vocab[policy_rng.Below(vocab.size())];
    b.policy.push_back({days[t], category});
    if (category == "rate_hike") rate_moves[t] += 0.25;
    if (category == "rate_cut") rate_moves[t] -= 0.25;
  }

  // Quarterly financials on the last business day of Mar/Jun/Sep/Dec and
  // monthly macro prints on the last business day of every month.
  std::vector<Date> fin_dates, macro_dates;
  std::vector<double> profit, debt, cash, gdp, cpi, rate;
  double log_profit = 0.0, profit_level = 100.0, debt_ratio = 0.45, gdp_growth = 2.0,
         inflation = 2.0, policy_rate = 1.5;
  for (std::size_t t = 0; t < n; ++t) {
    policy_rate = std::max(0.0, policy_rate + rate_moves[t]);
    const bool month_end = t + 1 == n || MonthOf(days[t + 1]) != MonthOf(days[t]);
    if (!month_end || t + 1 == n) continue;
    policy_rate = 1.5 + 0.9 * (policy_rate - 1.5);
    gdp_growth = 2.0 + 0.8 * (gdp_growth - 2.0) + fund_rng.Normal(0.0, 0.3);
    inflation = 2.0 + 0.9 * (inflation - 2.0) + fund_rng.Normal(0.0, 0.2);
    macro_dates.push_back(days[t]);
    gdp.push_back(gdp_growth);
    cpi.push_back(inflation);
    rate.push_back(policy_rate + fund_rng.Normal(0.0, 0.02));
    if (MonthOf(days[t]) % 3 == 0) {
      log_profit = 0.8 * log_profit + fund_rng.Normal(0.0, 0.05);
      profit_level = 100.0 * std::exp(log_profit);
      debt_ratio = std::clamp(0.45 + 0.8 * (debt_ratio - 0.45) +
                                  fund_rng.Normal(0.0, 0.03),
                              0.05, 0.95);
      fin_dates.push_back(days[t]);
      profit.push_back(profit_level);
      debt.push_back(debt_ratio);
      cash.push_back(profit_level * (0.8 + fund_rng.Normal(0.0, 0.1)));
    }
  }
  b.financial = TimeSeriesFrame(std::move(fin_dates));
  b.financial.AddColumn("profit", std::move(profit));
  b.financial.AddColumn("debt_ratio", std::move(debt));
  b.financial.AddColumn("cash_flow", std::move(cash));
  b.macro = TimeSeriesFrame(std::move(macro_dates));
  b.macro.AddColumn("gdp", std::move(gdp));
  b.macro.AddColumn("cpi", std::move(cpi));
  b.macro.AddColumn("interest_rate", std::move(rate));
  return b;
}

}  // namespace riskcast
