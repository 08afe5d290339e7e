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

#ifndef RISKCAST_TRAINING_H_
#define RISKCAST_TRAINING_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "riskcast/features.h"
#include "riskcast/models.h"
#include "riskcast/tensor.h"

namespace riskcast {

// ---------------------------------------------------------------------------
// Loss

struct MseResult {
  double loss = 0.0;
  std::vector<double> grad;  // dL/dyhat_i = -2 (y_i - yhat_i) / N
};

MseResult MseLoss(std::span<const double> y, std::span<const double> yhat);

// ---------------------------------------------------------------------------
// Adam

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct AdamState {
  explicit AdamState(const Shape& shape) : m(shape), v(shape) {}

  Tensor m;
  Tensor v;
  std::uint64_t t = 0;
};

// Bias-corrected Adam update of `param` in place.
void AdamStep(AdamState& state, Tensor& param, const Tensor& grad,
              const AdamConfig& cfg);

// ---------------------------------------------------------------------------
// Training loop

struct GridPoint {
  double learning_rate = 1e-3;
  std::size_t hidden = 32;

  friend bool operator==(const GridPoint&, const GridPoint&) = default;
};

struct TrainConfig {
  AdamConfig adam;
  std::size_t max_epochs = 200;
  std::size_t batch_size = 32;
  std::size_t patience = 10;
  double dropout_p = 0.2;
  std::uint64_t seed = 7;
  std::vector<GridPoint> grid;

  // Throws ParameterError on out-of-range values.
  void Validate() const;
};

struct TrainLog {
  std::vector<double> train_mse;  // mean training-mode batch loss per epoch
  std::vector<double> val_mse;    // inference-mode validation MSE per epoch
  std::size_t best_epoch = 0;
  bool stopped_early = false;

  std::size_t epochs() const { return val_mse.size(); }
  // +inf when no epoch produced a finite validation loss.
  double best_val_mse() const;
  // `epoch,train_mse,val_mse`
  void WriteCsv(std::ostream& out) const;
};

// Random streams derived from TrainConfig::seed.
enum class SeedStream : std::uint64_t { kInit = 1, kShuffle = 2, kDropout = 3 };

// Hybrid model built from `dims` and initialized from the kInit stream.
HybridModel MakeHybrid(const HybridDims& dims, const TrainConfig& cfg);

// Inference-mode MSE over a sample set.
double EvaluateMse(const HybridModel& model, const SampleSet& samples);

// Called after every optimizer step with (epoch, batch index).
using BatchCallback = std::function<void(std::size_t, std::size_t)>;

// Mini-batch Adam with seeded shuffling. Stops once validation MSE has not
// improved for `patience` consecutive epochs and leaves the model holding the
// parameters of the best validation epoch.
TrainLog Fit(HybridModel& model, const SampleSet& train, const SampleSet& val,
             const TrainConfig& cfg, const BatchCallback& on_batch = {});

// ---------------------------------------------------------------------------
// Grid search

using ModelFactory =
    std::function<HybridModel(const GridPoint& point, const TrainConfig& cfg)>;

// Factory used by the CLI: `base` dims with the grid point's hidden size.
ModelFactory HybridFactory(const HybridDims& base);

struct GridResult {
  GridPoint best;
  std::size_t best_index = 0;
  HybridModel model;
  TrainLog log;
  std::vector<double> scores;  // best validation MSE per grid point
  std::vector<TrainLog> logs;
};

// One Fit per grid point with that point's learning rate; the minimum best
// validation MSE wins, ties going to the earlier point. Every point trains
// from cfg.seed, so results do not depend on enumeration order or `workers`.
GridResult GridSearch(const ModelFactory& factory, const SampleSet& train,
                      const SampleSet& val, const TrainConfig& cfg,
                      std::size_t workers = 1);

// ---------------------------------------------------------------------------
// Gradient checking

struct GradientProbe {
  std::vector<ParamRef> params;
  std::function<double()> loss;                     // at current params
  std::function<std::vector<Tensor>()> gradients;  // analytic, same order
};

struct GradientCheckResult {
  double max_relative_error = 0.0;
  std::string worst_parameter;
  std::size_t worst_index = 0;
  std::size_t checked = 0;
};

// Central differences (L(p+eps) - L(p-eps)) / 2eps for every scalar
// parameter; relative error |a - n| / max(|a|, |n|, 1e-8). A non-finite loss
// raises NumericalError naming the parameter.
GradientCheckResult GradientCheck(const GradientProbe& probe, double eps = 1e-5);

// Squared error of one sample under inference mode (dropout off).
GradientProbe HybridProbe(HybridModel& model, const Tensor& seq,
                          const Tensor& stat, double target);

}  // namespace riskcast

#endif  // RISKCAST_TRAINING_H_
