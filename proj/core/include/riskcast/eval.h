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

#ifndef RISKCAST_EVAL_H_
#define RISKCAST_EVAL_H_

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace riskcast {

// All metrics take (actual, predicted) of equal nonzero length and throw
// ContractError otherwise.

// (1/N) sum (y_i - yhat_i)^2. Training's loss uses this same function.
double ComputeMse(std::span<const double> y, std::span<const double> yhat);

// Both series are binarized at `threshold` (value > threshold is high risk);
// returns the fraction of samples whose classes agree.
double ComputeAccuracy(std::span<const double> y, std::span<const double> yhat,
                       double threshold = 0.5);

// 1 - SS_res / SS_tot. Needs N >= 2; zero variance in y raises
// NumericalError instead of returning NaN.
double ComputeR2(std::span<const double> y, std::span<const double> yhat);

struct EvalReport {
  double mse = 0.0;
  double accuracy = 0.0;
  double r2 = 0.0;
  std::size_t n = 0;
  double threshold = 0.5;
};

EvalReport Evaluate(std::span<const double> y, std::span<const double> yhat,
                    double threshold = 0.5);

struct NamedReport {
  std::string model;
  EvalReport report;
};

struct ComparisonReport {
  std::vector<NamedReport> rows;
  // Row indices holding the best value; more than one entry means a tie.
  std::vector<std::size_t> mse_winners;
  std::vector<std::size_t> accuracy_winners;
  std::vector<std::size_t> r2_winners;
};

// Needs >= 2 rows evaluated on the same number of samples.
ComparisonReport CompareModels(std::vector<NamedReport> rows);

// Aligned text table: Model | MSE | Accuracy | R². Winning cells carry '*'.
std::string FormatComparisonTable(const ComparisonReport& report);
// `model,mse,accuracy,r2` header plus one row per model.
void WriteComparisonCsv(std::ostream& out, const std::vector<NamedReport>& rows);

}  // namespace riskcast

#endif  // RISKCAST_EVAL_H_
