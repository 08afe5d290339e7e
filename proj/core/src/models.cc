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

#include "riskcast/models.h"

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "riskcast/error.h"

namespace riskcast {

// ---------------------------------------------------------------------------
// HybridModel

HybridModel::HybridModel(const HybridDims& dims, double dropout_p)
    : dims_(dims),
      dropout_{dropout_p},
      conv_(Conv1DLayer::Create(dims.sentiment_features, dims.conv_channels,
                                dims.conv_width)),
      lstm_(LSTMCell::Create(dims.lstm_inputs(), dims.hidden)),
      head_(DenseLayer::Create(dims.hidden + dims.static_features, 1)) {
  if (dims.window == 0 || dims.market_features == 0) {
    throw ParameterError("hybrid model needs T >= 1 and F_market >= 1");
  }
  dropout_.Validate();
}

void HybridModel::Initialize(SeededRng& rng) {
  conv_.Initialize(rng);
  lstm_.Initialize(rng);
  head_.Initialize(rng);
}

void HybridModel::set_dropout(double p) {
  DropoutSpec spec{p};
  spec.Validate();
  dropout_ = spec;
}

std::vector<ParamRef> HybridModel::Parameters() {
  return {{"conv.kernels", &conv_.kernels}, {"conv.bias", &conv_.bias},
          {"lstm.w_x", &lstm_.w_x},         {"lstm.w_h", &lstm_.w_h},
          {"lstm.b", &lstm_.b},             {"head.w", &head_.w},
          {"head.b", &head_.b}};
}

std::vector<const Tensor*> HybridModel::Parameters() const {
  return {&conv_.kernels, &conv_.bias, &lstm_.w_x, &lstm_.w_h,
          &lstm_.b,       &head_.w,    &head_.b};
}

std::size_t HybridModel::ParameterCount() const {
  std::size_t n = 0;
  for (const Tensor* t : Parameters()) n += t->size();
  return n;
}

namespace {

void CheckHybridInput(const HybridDims& d, const Tensor& seq, const Tensor& stat) {
  if (seq.shape() != Shape{d.window, d.seq_features()} ||
      stat.shape() != Shape{d.static_features}) {
    throw DimensionError(
        "sample " + ShapeString(seq.shape()) + " + " +
        ShapeString(stat.shape()) + " does not match model dims " +
        ShapeString({d.window, d.seq_features()}) + " + " +
        ShapeString({d.static_features}));
  }
}

}  // namespace

double HybridForward(const HybridModel& model, const Tensor& seq,
                     const Tensor& stat, Mode mode, SeededRng* rng,
                     HybridCache* cache) {
  const HybridDims& d = model.dims();
  CheckHybridInput(d, seq, stat);
  const std::size_t steps = d.window, fm = d.market_features,
                    fs = d.sentiment_features, pad = d.conv_width - 1,
                    cout = d.conv_channels, hidden = d.hidden;

  // Left zero-pad so output row t only sees sentiment rows <= t.
  Tensor padded({steps + pad, fs});
  for (std::size_t t = 0; t < steps; ++t)
    for (std::size_t c = 0; c < fs; ++c) padded(t + pad, c) = seq(t, fm + c);

  Conv1DCache conv_cache;
  Tensor conv_pre = Conv1DForward(model.conv(), padded, &conv_cache);

  Tensor lstm_in({steps, d.lstm_inputs()});
  for (std::size_t t = 0; t < steps; ++t) {
    for (std::size_t c = 0; c < fm; ++c) lstm_in(t, c) = seq(t, c);
    for (std::size_t c = 0; c < cout; ++c)
      lstm_in(t, fm + c) = Activate(Activation::kRelu, conv_pre(t, c));
  }

  LSTMCache lstm_cache;
  const Tensor zeros({hidden});
  Tensor hs = LSTMForward(model.lstm(), lstm_in, zeros, zeros,
                          cache ? &lstm_cache : nullptr);

  Tensor h_last = Tensor::Vector(hs.row(steps - 1));
  Tensor mask = Tensor::Full({hidden}, 1.0);
  if (mode == Mode::kTrain && model.dropout().p > 0.0) {
    if (!rng) throw ContractError("training-mode forward needs an rng for dropout");
    DropoutResult dr = DropoutForward(model.dropout(), h_last, *rng, mode);
    h_last = std::move(dr.output);
    mask = std::move(dr.mask);
  }

  Tensor head_in({hidden + d.static_features});
  for (std::size_t u = 0; u < hidden; ++u) head_in[u] = h_last[u];
  for (std::size_t j = 0; j < d.static_features; ++j) head_in[hidden + j] = stat[j];

  DenseCache head_cache;
  const double score = DenseForward(model.head(), head_in, &head_cache)[0];

  if (cache) {
    cache->seq = seq;
    cache->conv = std::move(conv_cache);
    cache->conv_pre = std::move(conv_pre);
    cache->lstm = std::move(lstm_cache);
    cache->dropout_mask = std::move(mask);
    cache->head = std::move(head_cache);
  }
  return score;
}

HybridGrads HybridBackward(const HybridModel& model, const HybridCache& cache,
                           double d_score) {
  const HybridDims& d = model.dims();
  const std::size_t steps = d.window, fm = d.market_features,
                    fs = d.sentiment_features, pad = d.conv_width - 1,
                    cout = d.conv_channels, hidden = d.hidden;
  if (cache.seq.shape() != Shape{steps, d.seq_features()} ||
      cache.conv_pre.shape() != Shape{steps, cout} ||
      cache.dropout_mask.shape() != Shape{hidden}) {
    throw ContractError("hybrid backward: cache does not come from this model");
  }

  DenseGrads head_g = DenseBackward(model.head(), cache.head,
                                    Tensor::Vector({d_score}));
  Tensor d_static({d.static_features});
  for (std::size_t j = 0; j < d.static_features; ++j)
    d_static[j] = head_g.d_input[hidden + j];

  Tensor d_hs({steps, hidden});
  for (std::size_t u = 0; u < hidden; ++u)
    d_hs(steps - 1, u) = head_g.d_input[u] * cache.dropout_mask[u];
  LSTMGrads lstm_g = LSTMBackward(model.lstm(), cache.lstm, d_hs);

  Tensor d_seq({steps, d.seq_features()});
  Tensor d_conv_pre({steps, cout});
  for (std::size_t t = 0; t < steps; ++t) {
    for (std::size_t c = 0; c < fm; ++c) d_seq(t, c) = lstm_g.d_xs(t, c);
    for (std::size_t c = 0; c < cout; ++c) {
      d_conv_pre(t, c) =
          lstm_g.d_xs(t, fm + c) *
          ActivationDerivative(Activation::kRelu, cache.conv_pre(t, c));
    }
  }
  Conv1DGrads conv_g = Conv1DBackward(model.conv(), cache.conv, d_conv_pre);
  for (std::size_t t = 0; t < steps; ++t)
    for (std::size_t c = 0; c < fs; ++c)
      d_seq(t, fm + c) = conv_g.d_input(t + pad, c);

  HybridGrads g;
  g.params.reserve(7);
  g.params.push_back(std::move(conv_g.d_kernels));
  g.params.push_back(std::move(conv_g.d_bias));
  g.params.push_back(std::move(lstm_g.d_w_x));
  g.params.push_back(std::move(lstm_g.d_w_h));
  g.params.push_back(std::move(lstm_g.d_b));
  g.params.push_back(std::move(head_g.d_w));
  g.params.push_back(std::move(head_g.d_b));
  g.d_seq = std::move(d_seq);
  g.d_static = std::move(d_static);
  return g;
}

// ---------------------------------------------------------------------------
// Linear baseline

std::vector<double> FlattenSample(const Tensor& seq, const Tensor& stat) {
  std::vector<double> row(seq.values().begin(), seq.values().end());
  row.insert(row.end(), stat.values().begin(), stat.values().end());
  return row;
}

LinearRegressionModel LinearFit(const SampleSet& samples, double lambda) {
  samples.Validate();
  if (samples.size() < 2) {
    throw ContractError("linear regression needs at least 2 samples, got " +
                        std::to_string(samples.size()));
  }
  if (!(lambda >= 0.0)) throw ParameterError("ridge lambda must be >= 0");
  LinearRegressionModel model;
  model.window = samples.seq[0].dim(0);
  model.seq_features = samples.seq[0].dim(1);
  model.static_features = samples.stat[0].size();
  model.lambda = lambda;
  const std::size_t n = samples.size(), p = model.input_size();

  Eigen::MatrixXd x(n, p);
  Eigen::VectorXd y(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (samples.seq[i].shape() != samples.seq[0].shape() ||
        samples.stat[i].shape() != samples.stat[0].shape()) {
      throw DimensionError("sample " + std::to_string(i) + " has a different shape");
    }
    const auto row = FlattenSample(samples.seq[i], samples.stat[i]);
    for (std::size_t j = 0; j < p; ++j) x(i, j) = row[j];
    y(i) = samples.y[i];
  }
  // Centering removes the intercept from the solve; it is recovered below.
  const Eigen::RowVectorXd x_mean = x.colwise().mean();
  const double y_mean = y.mean();
  x.rowwise() -= x_mean;
  y.array() -= y_mean;

  Eigen::MatrixXd gram = x.transpose() * x;
  gram.diagonal().array() += lambda;
  const Eigen::VectorXd rhs = x.transpose() * y;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
    throw NumericalError("ridge normal equations are singular");
  }
  const Eigen::VectorXd w = ldlt.solve(rhs);
  if (!w.allFinite()) {
    throw NumericalError("ridge normal equations are singular (non-finite solve)");
  }
  model.weights.assign(w.data(), w.data() + p);
  model.bias = y_mean - x_mean.dot(w);
  return model;
}

double LinearPredict(const LinearRegressionModel& model, const Tensor& seq,
                     const Tensor& stat) {
  if (seq.shape() != Shape{model.window, model.seq_features} ||
      stat.shape() != Shape{model.static_features}) {
    throw DimensionError("sample " + ShapeString(seq.shape()) + " + " +
                         ShapeString(stat.shape()) +
                         " does not match the linear model input " +
                         ShapeString({model.window, model.seq_features}) +
                         " + " + ShapeString({model.static_features}));
  }
  double acc = model.bias;
  std::size_t j = 0;
  for (double v : seq.values()) acc += model.weights[j++] * v;
  for (double v : stat.values()) acc += model.weights[j++] * v;
  return acc;
}

double RidgeObjective(const LinearRegressionModel& model,
                      const SampleSet& samples) {
  double obj = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double r = LinearPredict(model, samples.seq[i], samples.stat[i]) -
                     samples.y[i];
    obj += r * r;
  }
  for (double w : model.weights) obj += model.lambda * w * w;
  return obj;
}

// ---------------------------------------------------------------------------
// Prediction

void CheckSampleDims(const AnyModel& model, const SampleSet& samples) {
  samples.Validate();
  if (samples.empty()) return;
  // Prediction on the first sample triggers the dimension check.
  std::visit(
      [&](const auto& m) {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, HybridModel>) {
          CheckHybridInput(m.dims(), samples.seq[0], samples.stat[0]);
        } else {
          LinearPredict(m, samples.seq[0], samples.stat[0]);
        }
      },
      model);
}

std::vector<double> PredictScores(const AnyModel& model,
                                  const SampleSet& samples) {
  CheckSampleDims(model, samples);
  std::vector<double> scores;
  scores.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    scores.push_back(std::visit(
        [&](const auto& m) {
          using M = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<M, HybridModel>) {
            return HybridForward(m, samples.seq[i], samples.stat[i],
                                 Mode::kInfer, nullptr);
          } else {
            return LinearPredict(m, samples.seq[i], samples.stat[i]);
          }
        },
        model));
  }
  return scores;
}

std::vector<Prediction> PredictBatch(const AnyModel& model,
                                     const SampleSet& samples) {
  const std::vector<double> scores = PredictScores(model, samples);
  std::vector<Prediction> out;
  out.reserve(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    out.push_back({scores[i], samples.sample_dates[i]});
  }
  return out;
}

std::string ModelKindName(const AnyModel& model) {
  return std::holds_alternative<HybridModel>(model) ? "hybrid" : "linreg";
}

}  // namespace riskcast
