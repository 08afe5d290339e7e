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

#include "riskcast/training.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numeric>
#include <optional>
#include <ostream>
#include <thread>

#include "riskcast/csv.h"
#include "riskcast/error.h"
#include "riskcast/eval.h"

namespace riskcast {

MseResult MseLoss(std::span<const double> y, std::span<const double> yhat) {
  MseResult r;
  r.loss = ComputeMse(y, yhat);
  const double n = static_cast<double>(y.size());
  r.grad.resize(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) r.grad[i] = -2.0 * (y[i] - yhat[i]) / n;
  return r;
}

void AdamStep(AdamState& state, Tensor& param, const Tensor& grad,
              const AdamConfig& cfg) {
  if (param.size() != grad.size() || state.m.size() != param.size() ||
      state.v.size() != param.size()) {
    throw ContractError("adam step: parameter " + ShapeString(param.shape()) +
                        ", gradient " + ShapeString(grad.shape()) +
                        ", state " + ShapeString(state.m.shape()) + " disagree");
  }
  ++state.t;
  const double t = static_cast<double>(state.t);
  const double correction1 = 1.0 - std::pow(cfg.beta1, t);
  const double correction2 = 1.0 - std::pow(cfg.beta2, t);
  for (std::size_t i = 0; i < param.size(); ++i) {
    const double g = grad[i];
    state.m[i] = cfg.beta1 * state.m[i] + (1.0 - cfg.beta1) * g;
    state.v[i] = cfg.beta2 * state.v[i] + (1.0 - cfg.beta2) * g * g;
    const double m_hat = state.m[i] / correction1;
    const double v_hat = state.v[i] / correction2;
    param[i] -= cfg.learning_rate * m_hat / (std::sqrt(v_hat) + cfg.epsilon);
  }
}

void TrainConfig::Validate() const {
  auto fail = [](const std::string& m) { throw ParameterError(m); };
  if (!(adam.learning_rate > 0.0)) fail("learning rate must be > 0");
  if (!(adam.beta1 > 0.0 && adam.beta1 < 1.0)) fail("beta1 must lie in (0, 1)");
  if (!(adam.beta2 > 0.0 && adam.beta2 < 1.0)) fail("beta2 must lie in (0, 1)");
  if (!(adam.epsilon > 0.0)) fail("epsilon must be > 0");
  if (batch_size == 0) fail("batch size must be >= 1");
  if (patience == 0) fail("patience must be >= 1");
  DropoutSpec{dropout_p}.Validate();
  for (const auto& p : grid) {
    if (!(p.learning_rate > 0.0) || p.hidden == 0) {
      fail("grid points need learning rate > 0 and hidden >= 1");
    }
  }
}

double TrainLog::best_val_mse() const {
  double best = std::numeric_limits<double>::infinity();
  for (double v : val_mse) {
    if (std::isfinite(v)) best = std::min(best, v);
  }
  return best;
}

void TrainLog::WriteCsv(std::ostream& out) const {
  WriteCsvRow(out, {"epoch", "train_mse", "val_mse"});
  for (std::size_t e = 0; e < val_mse.size(); ++e) {
    WriteCsvRow(out, {std::to_string(e), FormatDouble(train_mse[e]),
                      FormatDouble(val_mse[e])});
  }
}

HybridModel MakeHybrid(const HybridDims& dims, const TrainConfig& cfg) {
  HybridModel model(dims, cfg.dropout_p);
  SeededRng rng =
      SeededRng(cfg.seed).Split(static_cast<std::uint64_t>(SeedStream::kInit));
  model.Initialize(rng);
  return model;
}

double EvaluateMse(const HybridModel& model, const SampleSet& samples) {
  return ComputeMse(samples.y, PredictScores(model, samples));
}

namespace {

bool AllParamsFinite(const HybridModel& model) {
  for (const Tensor* t : model.Parameters()) {
    if (!t->AllFinite()) return false;
  }
  return true;
}

}  // namespace

TrainLog Fit(HybridModel& model, const SampleSet& train, const SampleSet& val,
             const TrainConfig& cfg, const BatchCallback& on_batch) {
  cfg.Validate();
  train.Validate();
  val.Validate();
  if (train.empty() || val.empty()) {
    throw ContractError("fit needs nonempty training and validation sets");
  }
  CheckSampleDims(model, train);
  CheckSampleDims(model, val);

  TrainLog log;
  if (cfg.max_epochs == 0) return log;

  const SeededRng root(cfg.seed);
  SeededRng shuffle_rng =
      root.Split(static_cast<std::uint64_t>(SeedStream::kShuffle));
  SeededRng dropout_rng =
      root.Split(static_cast<std::uint64_t>(SeedStream::kDropout));

  std::vector<ParamRef> params = model.Parameters();
  std::vector<AdamState> adam;
  for (const auto& p : params) adam.emplace_back(p.value->shape());

  std::optional<HybridModel> best;
  double best_val = std::numeric_limits<double>::infinity();
  std::size_t since_best = 0;

  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<HybridCache> caches(std::min(cfg.batch_size, train.size()));
  std::vector<double> batch_y, batch_yhat;

  for (std::size_t epoch = 0; epoch < cfg.max_epochs; ++epoch) {
    // Fisher-Yates with the dedicated shuffle stream.
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[shuffle_rng.Below(i)]);
    }
    double epoch_loss = 0.0;
    bool diverged = false;
    std::size_t batch_index = 0;
    for (std::size_t start = 0; start < order.size();
         start += cfg.batch_size, ++batch_index) {
      const std::size_t end = std::min(order.size(), start + cfg.batch_size);
      batch_y.clear();
      batch_yhat.clear();
      for (std::size_t k = start; k < end; ++k) {
        const std::size_t i = order[k];
        batch_y.push_back(train.y[i]);
        batch_yhat.push_back(HybridForward(model, train.seq[i], train.stat[i],
                                           Mode::kTrain, &dropout_rng,
                                           &caches[k - start]));
      }
      const MseResult loss = MseLoss(batch_y, batch_yhat);
      epoch_loss += loss.loss * static_cast<double>(end - start);

      std::vector<Tensor> grads;
      for (std::size_t k = start; k < end; ++k) {
        HybridGrads g = HybridBackward(model, caches[k - start], loss.grad[k - start]);
        if (grads.empty()) {
          grads = std::move(g.params);
        } else {
          for (std::size_t p = 0; p < grads.size(); ++p) {
            double* dst = grads[p].data();
            const double* src = g.params[p].data();
            for (std::size_t j = 0; j < grads[p].size(); ++j) dst[j] += src[j];
          }
        }
      }
      for (std::size_t p = 0; p < params.size(); ++p) {
        AdamStep(adam[p], *params[p].value, grads[p], cfg.adam);
      }
      if (on_batch) on_batch(epoch, batch_index);
      if (!AllParamsFinite(model)) {
        diverged = true;
        break;
      }
    }
    if (diverged) {
      log.stopped_early = true;
      break;
    }

    const double val_mse = EvaluateMse(model, val);
    log.train_mse.push_back(epoch_loss / static_cast<double>(train.size()));
    log.val_mse.push_back(val_mse);
    if (std::isfinite(val_mse) && val_mse < best_val) {
      best_val = val_mse;
      log.best_epoch = epoch;
      best = model;
      since_best = 0;
    } else if (++since_best >= cfg.patience) {
      log.stopped_early = true;
      break;
    }
  }
  if (best) model = std::move(*best);
  return log;
}

ModelFactory HybridFactory(const HybridDims& base) {
  return [base](const GridPoint& point, const TrainConfig& cfg) {
    HybridDims dims = base;
    dims.hidden = point.hidden;
    return MakeHybrid(dims, cfg);
  };
}

GridResult GridSearch(const ModelFactory& factory, const SampleSet& train,
                      const SampleSet& val, const TrainConfig& cfg,
                      std::size_t workers) {
  cfg.Validate();
  if (cfg.grid.empty()) throw ParameterError("grid search needs a nonempty grid");
  const std::size_t n = cfg.grid.size();

  std::vector<std::optional<HybridModel>> models(n);
  std::vector<TrainLog> logs(n);
  std::vector<std::exception_ptr> errors(n);

  auto run_point = [&](std::size_t i) {
    try {
      TrainConfig point_cfg = cfg;
      point_cfg.adam.learning_rate = cfg.grid[i].learning_rate;
      point_cfg.grid.clear();
      HybridModel model = factory(cfg.grid[i], point_cfg);
      logs[i] = Fit(model, train, val, point_cfg);
      models[i] = std::move(model);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };

  workers = std::max<std::size_t>(1, std::min(workers, n));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) run_point(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) run_point(i);
      });
    }
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::vector<double> scores(n);
  std::size_t best = 0;
  for (std::size_t i = 0; i < n; ++i) {
    scores[i] = logs[i].best_val_mse();
    if (scores[i] < scores[best]) best = i;
  }
  return GridResult{cfg.grid[best], best, std::move(*models[best]), logs[best],
                    std::move(scores), std::move(logs)};
}

GradientCheckResult GradientCheck(const GradientProbe& probe, double eps) {
  if (!(eps > 0.0)) throw ParameterError("gradient check step must be > 0");
  const std::vector<Tensor> analytic = probe.gradients();
  if (analytic.size() != probe.params.size()) {
    throw ContractError("probe returned " + std::to_string(analytic.size()) +
                        " gradients for " + std::to_string(probe.params.size()) +
                        " parameters");
  }
  GradientCheckResult result;
  for (std::size_t p = 0; p < probe.params.size(); ++p) {
    Tensor& value = *probe.params[p].value;
    if (analytic[p].size() != value.size()) {
      throw ContractError("gradient for '" + probe.params[p].name +
                          "' has the wrong size");
    }
    for (std::size_t j = 0; j < value.size(); ++j) {
      const double saved = value[j];
      value[j] = saved + eps;
      const double up = probe.loss();
      value[j] = saved - eps;
      const double down = probe.loss();
      value[j] = saved;
      if (!std::isfinite(up) || !std::isfinite(down)) {
        throw NumericalError("non-finite loss while perturbing " +
                             probe.params[p].name + "[" + std::to_string(j) + "]");
      }
      const double numeric = (up - down) / (2.0 * eps);
      const double a = analytic[p][j];
      const double rel = std::abs(a - numeric) /
                         std::max({std::abs(a), std::abs(numeric), 1e-8});
      ++result.checked;
      if (rel > result.max_relative_error || result.worst_parameter.empty()) {
        result.max_relative_error = std::max(rel, result.max_relative_error);
        result.worst_parameter = probe.params[p].name;
        result.worst_index = j;
      }
    }
  }
  return result;
}

GradientProbe HybridProbe(HybridModel& model, const Tensor& seq,
                          const Tensor& stat, double target) {
  GradientProbe probe;
  probe.params = model.Parameters();
  probe.loss = [&model, seq, stat, target] {
    const double yhat = HybridForward(model, seq, stat, Mode::kInfer, nullptr);
    return ComputeMse(std::span<const double>(&target, 1),
                      std::span<const double>(&yhat, 1));
  };
  probe.gradients = [&model, seq, stat, target] {
    HybridCache cache;
    const double yhat = HybridForward(model, seq, stat, Mode::kInfer, nullptr, &cache);
    const MseResult loss = MseLoss(std::span<const double>(&target, 1),
                                   std::span<const double>(&yhat, 1));
    return HybridBackward(model, cache, loss.grad[0]).params;
  };
  return probe;
}

}  // namespace riskcast
