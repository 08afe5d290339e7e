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

#include "riskcast/eval.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "riskcast/csv.h"
#include "riskcast/error.h"

namespace riskcast {
namespace {

void CheckPair(std::span<const double> y, std::span<const double> yhat,
               const char* what) {
  if (y.empty() || y.size() != yhat.size()) {
    throw ContractError(std::string(what) + " needs equal nonempty inputs, got " +
                        std::to_string(y.size()) + " and " +
                        std::to_string(yhat.size()));
  }
}

}  // namespace

double ComputeMse(std::span<const double> y, std::span<const double> yhat) {
  CheckPair(y, yhat, "mse");
  double ss = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double r = y[i] - yhat[i];
    ss += r * r;
  }
  return ss / static_cast<double>(y.size());
}

double ComputeAccuracy(std::span<const double> y, std::span<const double> yhat,
                       double threshold) {
  CheckPair(y, yhat, "accuracy");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if ((y[i] > threshold) == (yhat[i] > threshold)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(y.size());
}

double ComputeR2(std::span<const double> y, std::span<const double> yhat) {
  CheckPair(y, yhat, "r2");
  if (y.size() < 2) throw ContractError("r2 needs at least 2 samples");
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= static_cast<double>(y.size());
  double ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    ss_res += (y[i] - yhat[i]) * (y[i] - yhat[i]);
    ss_tot += (y[i] - mean) * (y[i] - mean);
  }
  if (ss_tot == 0.0) {
    throw NumericalError("r2 is undefined: actual values have zero variance");
  }
  return 1.0 - ss_res / ss_tot;
}

EvalReport Evaluate(std::span<const double> y, std::span<const double> yhat,
                    double threshold) {
  return EvalReport{ComputeMse(y, yhat), ComputeAccuracy(y, yhat, threshold),
                    ComputeR2(y, yhat), y.size(), threshold};
}

namespace {

template <typename Better>
std::vector<std::size_t> Winners(const std::vector<NamedReport>& rows,
                                 double EvalReport::*metric, Better better) {
  double best = rows[0].report.*metric;
  for (const auto& r : rows) {
    if (better(r.report.*metric, best)) best = r.report.*metric;
  }
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].report.*metric == best) idx.push_back(i);
  }
  return idx;
}

std::string Fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

}  // namespace

ComparisonReport CompareModels(std::vector<NamedReport> rows) {
  if (rows.size() < 2) {
    throw ContractError("comparison needs at least two models");
  }
  for (const auto& r : rows) {
    if (r.report.n != rows[0].report.n) {
      throw ContractError("models were evaluated on different sample counts (" +
                          std::to_string(rows[0].report.n) + " vs " +
                          std::to_string(r.report.n) + ")");
    }
  }
  ComparisonReport out;
  out.mse_winners = Winners(rows, &EvalReport::mse, std::less<>{});
  out.accuracy_winners = Winners(rows, &EvalReport::accuracy, std::greater<>{});
  out.r2_winners = Winners(rows, &EvalReport::r2, std::greater<>{});
  out.rows = std::move(rows);
  return out;
}

std::string FormatComparisonTable(const ComparisonReport& report) {
  auto mark = [](const std::vector<std::size_t>& w, std::size_t i) {
    return std::find(w.begin(), w.end(), i) != w.end() ? "*" : " ";
  };
  std::size_t name_width = 5;
  for (const auto& r : report.rows) name_width = std::max(name_width, r.model.size());

  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof(line), "%-*s  %12s  %10s  %10s\n",
                static_cast<int>(name_width), "Model", "MSE", "Accuracy", "R2");
  out << line;
  out << std::string(name_width + 40, '-') << "\n";
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const auto& r = report.rows[i];
    std::snprintf(line, sizeof(line), "%-*s  %11s%s  %9s%s  %9s%s\n",
                  static_cast<int>(name_width), r.model.c_str(),
                  Fixed(r.report.mse, 6).c_str(), mark(report.mse_winners, i),
                  (Fixed(100.0 * r.report.accuracy, 1) + "%").c_str(),
                  mark(report.accuracy_winners, i),
                  Fixed(r.report.r2, 4).c_str(), mark(report.r2_winners, i));
    out << line;
  }
  auto verdict = [&](const char* metric, const std::vector<std::size_t>& w) {
    out << metric << ": ";
    if (w.size() > 1) out << "tie (";
    for (std::size_t k = 0; k < w.size(); ++k) {
      if (k) out << ", ";
      out << report.rows[w[k]].model;
    }
    if (w.size() > 1) out << ")";
    out << "\n";
  };
  out << "n = " << report.rows[0].report.n << ", accuracy threshold = "
      << FormatDouble(report.rows[0].report.threshold) << "\n";
  verdict("best MSE", report.mse_winners);
  verdict("best accuracy", report.accuracy_winners);
  verdict("best R2", report.r2_winners);
  return out.str();
}

void WriteComparisonCsv(std::ostream& out, const std::vector<NamedReport>& rows) {
  WriteCsvRow(out, {"model", "mse", "accuracy", "r2"});
  for (const auto& r : rows) {
    WriteCsvRow(out, {r.model, FormatDouble(r.report.mse),
                      FormatDouble(r.report.accuracy),
                      FormatDouble(r.report.r2)});
  }
}

}  // namespace riskcast
