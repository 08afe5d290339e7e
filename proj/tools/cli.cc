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

#include "cli.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "riskcast/csv.h"
#include "riskcast/data_io.h"
#include "riskcast/error.h"
#include "riskcast/eval.h"
#include "riskcast/features.h"
#include "riskcast/log.h"
#include "riskcast/model_io.h"
#include "riskcast/models.h"
#include "riskcast/pipeline.h"
#include "riskcast/training.h"

namespace riskcast::cli {
namespace {

namespace fs = std::filesystem;

constexpr const char* kExitCodeHelp =
    "Exit codes:\n"
    "  0  success\n"
    "  2  usage error (bad flag or out-of-range value)\n"
    "  3  schema error (malformed CSV or model file)\n"
    "  4  numerical error (divergence, singular system, failed gradcheck)\n"
    "  5  I/O error (unreadable or unwritable path)\n"
    "  6  other error (contract violation, dimension or split mismatch)\n"
    "All randomness derives from --seed (default 7).";

std::string Num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

struct DataFlags {
  std::string dir;
  std::string lexicon;

  SentimentLexicon Lexicon() const {
    return lexicon.empty() ? SentimentLexicon::Default() : SentimentLexicon::Load(lexicon);
  }
};

void AddDataFlags(CLI::App* cmd, DataFlags& f) {
  cmd->add_option("--data", f.dir, "Directory holding the input CSV files")->required();
  cmd->add_option("--lexicon", f.lexicon,
                  "Sentiment lexicon file (default: built-in finance lexicon)");
}

std::ofstream OpenOut(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path + "'");
  return out;
}

void Finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw IoError("failed writing '" + path + "'");
}

const Preprocessing& RequirePreprocessing(const ModelFile& file,
                                          const std::string& path) {
  if (!file.preprocessing) {
    throw ContractError("model '" + path +
                        "' carries no preprocessing state; retrain with `riskcast train`");
  }
  return *file.preprocessing;
}

SampleSet TestBlock(const SampleSet& samples, const Preprocessing& prep) {
  const SplitCounts c = ComputeSplit(samples.size(), prep.split);
  return samples.Slice(c.train + c.val, samples.size());
}

// ---------------------------------------------------------------------------
// gen-data

struct GenFlags {
  std::size_t days = 2000;
  std::uint64_t seed = kDefaultSeed;
  std::string out;
  double kappa = 0.8;
  double sigma0 = 0.01;
  double regime_prob = 0.01;
  bool linear_only = false;
  std::string lexicon;
};

int GenData(const GenFlags& f, std::ostream& out) {
  SynthConfig cfg;
  cfg.n_days = f.days;
  cfg.seed = f.seed;
  cfg.sentiment_strength = f.kappa;
  cfg.base_volatility = f.sigma0;
  cfg.regime_shift_prob = f.regime_prob;
  cfg.nonlinear = !f.linear_only;
  const SentimentLexicon lexicon =
      f.lexicon.empty() ? SentimentLexicon::Default() : SentimentLexicon::Load(f.lexicon);
  const DatasetBundle bundle = SynthGenerate(cfg, lexicon);
  const fs::path dir(f.out);
  WriteBundle(bundle, dir);

  nlohmann::json manifest = {
      {"generator", "riskcast synthetic market"},
      {"seed", cfg.seed},
      {"n_days", cfg.n_days},
      {"start", FormatDate(cfg.start)},
      {"base_volatility", cfg.base_volatility},
      {"regime_shift_prob", cfg.regime_shift_prob},
      {"sentiment_strength", cfg.sentiment_strength},
      {"nonlinear", cfg.nonlinear},
      {"lexicon", f.lexicon.empty() ? "built-in" : f.lexicon},
      {"files",
       {{"market", kMarketFile},
        {"financial", kFinancialFile},
        {"macro", kMacroFile},
        {"news", kNewsFile},
        {"policy", kPolicyFile}}},
      {"rows",
       {{"market", bundle.market.rows()},
        {"financial", bundle.financial.rows()},
        {"macro", bundle.macro.rows()},
        {"news", bundle.news.size()},
        {"policy", bundle.policy.size()}}},
  };
  const std::string manifest_path = (dir / "manifest.json").string();
  std::ofstream m = OpenOut(manifest_path);
  m << manifest.dump(2) << '\n';
  Finish(m, manifest_path);

  out << "wrote " << bundle.market.rows() << " trading days, " << bundle.news.size()
      << " news items and " << bundle.policy.size() << " policy events to "
      << dir.string() << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------
// train

struct TrainFlags {
  DataFlags data;
  std::string out;
  std::string log;
  std::uint64_t seed = kDefaultSeed;
  std::size_t epochs = 200;
  double lr = 1e-3;
  std::size_t batch = 32;
  std::size_t patience = 10;
  double dropout = 0.2;
  std::size_t hidden = 32;
  std::size_t conv_channels = 8;
  std::size_t conv_width = 3;
  std::size_t window = 20;
  std::size_t horizon = 5;
  std::vector<std::string> grid;
  std::size_t workers = 1;
  std::string baseline;
  double lambda = 1e-8;
  bool verbose = false;
};

std::vector<double> ParseList(const std::string& key, const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    double v = 0.0;
    if (!ParseDouble(item, v)) {
      throw ParameterError("--grid " + key + ": bad value '" + item + "'");
    }
    values.push_back(v);
  }
  if (values.empty()) throw ParameterError("--grid " + key + " has no values");
  return values;
}

std::vector<GridPoint> ParseGrid(const std::vector<std::string>& specs, double lr,
                                 std::size_t hidden) {
  std::vector<double> lrs{lr};
  std::vector<std::size_t> hiddens{hidden};
  for (const auto& spec : specs) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos) {
      throw ParameterError("--grid entries look like lr=0.001,0.01 or hidden=16,32; got '" +
                           spec + "'");
    }
    const std::string key = spec.substr(0, eq);
    const std::vector<double> values = ParseList(key, spec.substr(eq + 1));
    if (key == "lr") {
      lrs = values;
    } else if (key == "hidden") {
      hiddens.clear();
      for (double v : values) {
        if (!(v >= 1.0) || v != std::floor(v)) {
          throw ParameterError("--grid hidden values must be positive integers");
        }
        hiddens.push_back(static_cast<std::size_t>(v));
      }
    } else {
      throw ParameterError("unknown --grid key '" + key + "' (expected lr or hidden)");
    }
  }
  std::vector<GridPoint> grid;
  for (double l : lrs) {
    for (std::size_t h : hiddens) grid.push_back({l, h});
  }
  return grid;
}

void WriteGridLog(std::ostream& out, const GridResult& result,
                  const std::vector<GridPoint>& grid) {
  WriteCsvRow(out, {"point", "learning_rate", "hidden", "epoch", "train_mse", "val_mse"});
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const TrainLog& log = result.logs[i];
    for (std::size_t e = 0; e < log.epochs(); ++e) {
      WriteCsvRow(out, {std::to_string(i), FormatDouble(grid[i].learning_rate),
                        std::to_string(grid[i].hidden), std::to_string(e),
                        FormatDouble(log.train_mse[e]), FormatDouble(log.val_mse[e])});
    }
  }
}

int Train(const TrainFlags& f, std::ostream& out) {
  FeatureConfig fc;
  fc.window = f.window;
  fc.horizon = f.horizon;
  fc.vol_window = f.horizon;
  const SentimentLexicon lexicon = f.data.Lexicon();
  const DatasetBundle bundle = LoadBundle(f.data.dir);
  const PreparedData data = PrepareDataset(bundle, fc, SplitSpec{}, lexicon);
  out << "samples: " << data.all.size() << " (train " << data.train.size() << ", val "
      << data.val.size() << ", test " << data.test.size() << ")\n";

  const std::string log_path = f.log.empty() ? f.out + ".log.csv" : f.log;
  std::optional<AnyModel> model;

  if (!f.baseline.empty()) {
    if (f.baseline != "linreg") {
      throw ParameterError("unknown --baseline '" + f.baseline + "' (expected linreg)");
    }
    if (!f.grid.empty()) throw ParameterError("--grid applies to the hybrid model only");
    LinearRegressionModel lin = LinearFit(data.train, f.lambda);
    const double train_mse = ComputeMse(data.train.y, PredictScores(lin, data.train));
    const double val_mse = ComputeMse(data.val.y, PredictScores(lin, data.val));
    std::ofstream log = OpenOut(log_path);
    WriteCsvRow(log, {"epoch", "train_mse", "val_mse"});
    WriteCsvRow(log, {"0", FormatDouble(train_mse), FormatDouble(val_mse)});
    Finish(log, log_path);
    out << "linear baseline: " << lin.weights.size() << " weights\n";
    out << "best val MSE: " << Num(val_mse) << '\n';
    model = std::move(lin);
  } else {
    TrainConfig cfg;
    cfg.adam.learning_rate = f.lr;
    cfg.max_epochs = f.epochs;
    cfg.batch_size = f.batch;
    cfg.patience = f.patience;
    cfg.dropout_p = f.dropout;
    cfg.seed = f.seed;
    HybridDims base;
    base.hidden = f.hidden;
    base.conv_channels = f.conv_channels;
    base.conv_width = f.conv_width;
    const HybridDims dims = DimsFor(data.prep, base);

    if (!f.grid.empty()) {
      cfg.grid = ParseGrid(f.grid, f.lr, f.hidden);
      cfg.Validate();
      GridResult result = GridSearch(HybridFactory(dims), data.train, data.val, cfg,
                                     f.workers);
      for (std::size_t i = 0; i < cfg.grid.size(); ++i) {
        out << "grid point " << i << ": lr=" << Num(cfg.grid[i].learning_rate)
            << " hidden=" << cfg.grid[i].hidden << " epochs=" << result.logs[i].epochs()
            << " best_val_mse=" << Num(result.scores[i])
            << (i == result.best_index ? "  <- selected" : "") << '\n';
      }
      std::ofstream log = OpenOut(log_path);
      WriteGridLog(log, result, cfg.grid);
      Finish(log, log_path);
      out << "best val MSE: " << Num(result.log.best_val_mse()) << '\n';
      model = std::move(result.model);
    } else {
      cfg.Validate();
      HybridModel hybrid = MakeHybrid(dims, cfg);
      const TrainLog log = Fit(hybrid, data.train, data.val, cfg);
      if (f.verbose) {
        for (std::size_t e = 0; e < log.epochs(); ++e) {
          out << "epoch " << e << ": train_mse=" << Num(log.train_mse[e])
              << " val_mse=" << Num(log.val_mse[e]) << '\n';
        }
      }
      std::ofstream log_out = OpenOut(log_path);
      log.WriteCsv(log_out);
      Finish(log_out, log_path);
      out << "hybrid model: " << hybrid.ParameterCount() << " parameters, "
          << log.epochs() << " epochs (best " << log.best_epoch << ")"
          << (log.stopped_early ? ", stopped early" : "") << '\n';
      out << "best val MSE: " << Num(log.best_val_mse()) << '\n';
      model = std::move(hybrid);
    }
  }

  SaveModel(ModelFile{std::move(*model), data.prep}, f.out);
  out << "model written to " << f.out << "\nepoch log written to " << log_path << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------
// evaluate

struct EvalFlags {
  DataFlags data;
  std::string model;
  double threshold = 0.5;
  std::string csv;
};

int EvaluateCmd(const EvalFlags& f, std::ostream& out) {
  const ModelFile file = LoadModel(f.model);
  const Preprocessing& prep = RequirePreprocessing(file, f.model);
  const SampleSet samples = BuildSamples(LoadBundle(f.data.dir), prep, f.data.Lexicon());
  CheckSampleDims(file.model, samples);
  const SampleSet test = TestBlock(samples, prep);
  const EvalReport r = Evaluate(test.y, PredictScores(file.model, test), f.threshold);

  out << "model: " << ModelKindName(file.model) << '\n'
      << "test samples: " << r.n << " (" << FormatDate(test.sample_dates.front())
      << " .. " << FormatDate(test.sample_dates.back()) << ")\n"
      << "threshold: " << Num(r.threshold) << '\n'
      << "mse: " << Num(r.mse) << '\n'
      << "accuracy: " << Num(r.accuracy) << '\n'
      << "r2: " << Num(r.r2) << '\n';
  if (!f.csv.empty()) {
    std::ofstream csv = OpenOut(f.csv);
    WriteCsvRow(csv, {"model", "n", "threshold", "mse", "accuracy", "r2"});
    WriteCsvRow(csv, {ModelKindName(file.model), std::to_string(r.n),
                      FormatDouble(r.threshold), FormatDouble(r.mse),
                      FormatDouble(r.accuracy), FormatDouble(r.r2)});
    Finish(csv, f.csv);
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// predict

struct PredictFlags {
  DataFlags data;
  std::string model;
  std::string out;
};

int PredictCmd(const PredictFlags& f, std::ostream& out) {
  const ModelFile file = LoadModel(f.model);
  const Preprocessing& prep = RequirePreprocessing(file, f.model);
  const DatasetBundle bundle = LoadBundle(f.data.dir);
  SampleSet samples;
  try {
    samples = BuildSamples(bundle, prep, f.data.Lexicon());
  } catch (const InsufficientDataError& e) {
    Warn(std::string("no admissible windows: ") + e.what());
  }
  std::vector<Prediction> preds;
  if (!samples.empty()) {
    CheckSampleDims(file.model, samples);
    preds = PredictBatch(file.model, samples);
  }

  auto write = [&preds](std::ostream& s) {
    WriteCsvRow(s, {"date", "risk_score"});
    for (const auto& p : preds) WriteCsvRow(s, {FormatDate(p.date), FormatDouble(p.risk_score)});
  };
  if (f.out == "-") {
    write(out);
  } else {
    std::ofstream file_out = OpenOut(f.out);
    write(file_out);
    Finish(file_out, f.out);
    out << "wrote " << preds.size() << " predictions to " << f.out << '\n';
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// compare

struct CompareFlags {
  DataFlags data;
  std::vector<std::string> models;
  double threshold = 0.5;
  std::string csv;
};

bool SameSplit(const Preprocessing& a, const Preprocessing& b) {
  return a.split.train == b.split.train && a.split.val == b.split.val &&
         a.split.test == b.split.test && a.counts.train == b.counts.train &&
         a.counts.val == b.counts.val && a.counts.test == b.counts.test &&
         a.train_end == b.train_end && a.test_begin == b.test_begin;
}

int CompareCmd(const CompareFlags& f, std::ostream& out) {
  if (f.models.size() < 2) {
    throw ParameterError("compare needs at least two --model name=path entries");
  }
  const DatasetBundle bundle = LoadBundle(f.data.dir);
  const SentimentLexicon lexicon = f.data.Lexicon();
  std::vector<NamedReport> rows;
  std::optional<Preprocessing> reference;
  std::string reference_name;
  for (const auto& spec : f.models) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size()) {
      throw ParameterError("--model expects name=path, got '" + spec + "'");
    }
    const std::string name = spec.substr(0, eq), path = spec.substr(eq + 1);
    const ModelFile file = LoadModel(path);
    const Preprocessing& prep = RequirePreprocessing(file, path);
    if (!reference) {
      reference = prep;
      reference_name = name;
    } else if (!SameSplit(*reference, prep)) {
      throw ContractError("split mismatch: '" + name + "' was trained on a different " +
                          "chronological split than '" + reference_name + "'");
    }
    const SampleSet samples = BuildSamples(bundle, prep, lexicon);
    CheckSampleDims(file.model, samples);
    const SampleSet test = TestBlock(samples, prep);
    rows.push_back({name, Evaluate(test.y, PredictScores(file.model, test), f.threshold)});
  }
  const ComparisonReport report = CompareModels(rows);
  out << FormatComparisonTable(report);
  if (!f.csv.empty()) {
    std::ofstream csv = OpenOut(f.csv);
    WriteComparisonCsv(csv, report.rows);
    Finish(csv, f.csv);
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// gradcheck

struct GradFlags {
  std::uint64_t seed = kDefaultSeed;
  double eps = 1e-5;
  std::string break_layer;
};

constexpr double kGradTolerance = 1e-4;

int GradCheckCmd(const GradFlags& f, std::ostream& out) {
  if (!f.break_layer.empty() && f.break_layer != "conv" && f.break_layer != "lstm" &&
      f.break_layer != "head") {
    throw ParameterError("--break-layer must be conv, lstm or head");
  }
  if (!(f.eps > 0.0)) throw ParameterError("--eps must be positive");
  HybridDims dims;
  dims.window = 4;
  dims.market_features = 2;
  dims.sentiment_features = 2;
  dims.static_features = 3;
  dims.conv_width = 3;
  dims.conv_channels = 2;
  dims.hidden = 3;
  SeededRng rng(f.seed);
  HybridModel model(dims, 0.0);
  model.Initialize(rng);
  const Tensor seq = RandomTensor(rng, {dims.window, dims.seq_features()}, NormalDist{});
  const Tensor stat = RandomTensor(rng, {dims.static_features}, NormalDist{});
  const double target = rng.Uniform01();

  GradientProbe probe = HybridProbe(model, seq, stat, target);
  if (!f.break_layer.empty()) {
    // Test hook: corrupt the analytic gradient of one layer.
    const std::string prefix = f.break_layer + ".";
    auto exact = probe.gradients;
    std::vector<std::string> names;
    for (const auto& p : probe.params) names.push_back(p.name);
    probe.gradients = [exact, names, prefix] {
      std::vector<Tensor> g = exact();
      for (std::size_t i = 0; i < g.size(); ++i) {
        if (names[i].rfind(prefix, 0) != 0) continue;
        for (double& v : g[i].values()) v += 0.01 + 0.1 * std::abs(v);
      }
      return g;
    };
  }
  const GradientCheckResult r = GradientCheck(probe, f.eps);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3e", r.max_relative_error);
  out << "gradcheck: max relative error " << buf << " at " << r.worst_parameter << '['
      << r.worst_index << "] (" << r.checked << " parameters, eps " << Num(f.eps)
      << ")\n";
  const bool pass = r.max_relative_error < kGradTolerance;
  out << "result: " << (pass ? "PASS" : "FAIL") << " (tolerance " << Num(kGradTolerance)
      << ")\n";
  return pass ? kExitOk : kExitNumerical;
}

int ExitCodeFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kParameter:
      return kExitUsage;
    case ErrorKind::kSchema:
      return kExitSchema;
    case ErrorKind::kNumerical:
      return kExitNumerical;
    case ErrorKind::kIo:
      return kExitIo;
    case ErrorKind::kDimension:
    case ErrorKind::kContract:
      return kExitOther;
  }
  return kExitOther;
}

class WarningRedirect {
 public:
  explicit WarningRedirect(std::ostream& err)
      : previous_(SetWarningHandler(
            [&err](std::string_view msg) { err << "warning: " << msg << '\n'; })) {}
  ~WarningRedirect() { SetWarningHandler(previous_); }

 private:
  WarningHandler previous_;
};

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"riskcast: financial risk forecasting with a CNN-LSTM hybrid and a "
               "linear baseline"};
  app.name(args.empty() ? "riskcast" : fs::path(args[0]).filename().string());
  app.footer(kExitCodeHelp);
  app.require_subcommand(1, 1);

  GenFlags gen;
  auto* gen_cmd = app.add_subcommand("gen-data", "Write a synthetic dataset and manifest");
  gen_cmd->add_option("--out", gen.out, "Output directory")->required();
  gen_cmd->add_option("--days", gen.days, "Trading days to simulate (>= 200)")
      ->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed, "Random seed")->capture_default_str();
  gen_cmd->add_option("--kappa", gen.kappa, "Sentiment-to-volatility strength")
      ->capture_default_str();
  gen_cmd->add_option("--sigma0", gen.sigma0, "Base daily volatility")->capture_default_str();
  gen_cmd->add_option("--regime-prob", gen.regime_prob, "Daily regime flip probability")
      ->capture_default_str();
  gen_cmd->add_flag("--linear-only", gen.linear_only,
                    "Drop the sentiment x trend interaction term");
  gen_cmd->add_option("--lexicon", gen.lexicon, "Lexicon used to write news text");

  TrainFlags train;
  auto* train_cmd = app.add_subcommand("train", "Fit the hybrid model or the linear baseline");
  AddDataFlags(train_cmd, train.data);
  train_cmd->add_option("--out", train.out, "Model file to write")->required();
  train_cmd->add_option("--log", train.log, "Epoch log CSV (default: <out>.log.csv)");
  train_cmd->add_option("--seed", train.seed, "Random seed")->capture_default_str();
  train_cmd->add_option("--epochs", train.epochs, "Maximum epochs")->capture_default_str();
  train_cmd->add_option("--lr", train.lr, "Adam learning rate")->capture_default_str();
  train_cmd->add_option("--batch", train.batch, "Mini-batch size")->capture_default_str();
  train_cmd->add_option("--patience", train.patience, "Early-stopping patience (epochs)")
      ->capture_default_str();
  train_cmd->add_option("--dropout", train.dropout, "Dropout probability")
      ->capture_default_str();
  train_cmd->add_option("--hidden", train.hidden, "LSTM hidden size")->capture_default_str();
  train_cmd->add_option("--conv-channels", train.conv_channels, "Conv output channels")
      ->capture_default_str();
  train_cmd->add_option("--conv-width", train.conv_width, "Conv kernel width")
      ->capture_default_str();
  train_cmd->add_option("--window", train.window, "Input window length (days)")
      ->capture_default_str();
  train_cmd->add_option("--horizon", train.horizon, "Forecast horizon (days)")
      ->capture_default_str();
  train_cmd->add_option("--grid", train.grid,
                        "Grid search, e.g. --grid lr=0.001,0.01 hidden=16,32");
  train_cmd->add_option("--workers", train.workers, "Parallel grid workers")
      ->capture_default_str();
  train_cmd->add_option("--baseline", train.baseline, "Train a baseline instead (linreg)");
  train_cmd->add_option("--lambda", train.lambda, "Ridge jitter for the linear baseline")
      ->capture_default_str();
  train_cmd->add_flag("-v,--verbose", train.verbose, "Print per-epoch losses");

  EvalFlags eval;
  auto* eval_cmd = app.add_subcommand("evaluate", "Score a model on the test split");
  AddDataFlags(eval_cmd, eval.data);
  eval_cmd->add_option("--model", eval.model, "Model file")->required();
  eval_cmd->add_option("--threshold", eval.threshold, "Accuracy threshold")
      ->capture_default_str();
  eval_cmd->add_option("--csv", eval.csv, "Also write the report as CSV");

  PredictFlags pred;
  auto* pred_cmd = app.add_subcommand("predict", "Write date,risk_score for every window");
  AddDataFlags(pred_cmd, pred.data);
  pred_cmd->add_option("--model", pred.model, "Model file")->required();
  pred_cmd->add_option("--out", pred.out, "Output CSV ('-' for stdout)")->required();

  CompareFlags cmp;
  auto* cmp_cmd = app.add_subcommand("compare", "Side-by-side test metrics of several models");
  AddDataFlags(cmp_cmd, cmp.data);
  cmp_cmd->add_option("--model", cmp.models, "name=path, repeat for each model")
      ->required();
  cmp_cmd->add_option("--threshold", cmp.threshold, "Accuracy threshold")
      ->capture_default_str();
  cmp_cmd->add_option("--csv", cmp.csv, "Also write model,mse,accuracy,r2 rows");

  GradFlags grad;
  auto* grad_cmd =
      app.add_subcommand("gradcheck", "Finite-difference check of the hybrid gradients");
  grad_cmd->add_option("--seed", grad.seed, "Random seed")->capture_default_str();
  grad_cmd->add_option("--eps", grad.eps, "Central-difference step")->capture_default_str();
  grad_cmd->add_option("--break-layer", grad.break_layer,
                       "Corrupt one layer's gradient (conv, lstm or head)");

  std::vector<std::string> rest(args.rbegin(), args.rend());
  if (!rest.empty()) rest.pop_back();
  try {
    app.parse(rest);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  WarningRedirect redirect(err);
  try {
    if (gen_cmd->parsed()) return GenData(gen, out);
    if (train_cmd->parsed()) return Train(train, out);
    if (eval_cmd->parsed()) return EvaluateCmd(eval, out);
    if (pred_cmd->parsed()) return PredictCmd(pred, out);
    if (cmp_cmd->parsed()) return CompareCmd(cmp, out);
    if (grad_cmd->parsed()) return GradCheckCmd(grad, out);
  } catch (const Error& e) {
    err << "error (" << ErrorKindName(e.kind()) << "): " << e.what() << '\n';
    return ExitCodeFor(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitOther;
  }
  return kExitUsage;
}

}  // namespace riskcast::cli
