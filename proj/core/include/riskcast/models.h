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

#ifndef RISKCAST_MODELS_H_
#define RISKCAST_MODELS_H_

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "riskcast/date.h"
#include "riskcast/features.h"
#include "riskcast/layers.h"
#include "riskcast/rng.h"
#include "riskcast/tensor.h"

namespace riskcast {

// Named handle to one trainable tensor.
struct ParamRef {
  std::string name;
  Tensor* value;
};

// ---------------------------------------------------------------------------
// Hybrid conv/LSTM regressor
//
// Each input sample is a [T x (F_market + F_sentiment)] window plus a static
// vector. The sentiment block is left-padded with k-1 zero rows, convolved and
// passed through relu so the conv output keeps one row per day. Every day's
// [market || conv] row feeds the LSTM; the last hidden state goes through
// dropout, is joined with the static vector, and a dense head emits the
// score. The head has no output activation.

struct HybridDims {
  std::size_t window = 20;
  std::size_t market_features = 1;
  std::size_t sentiment_features = 1;
  std::size_t static_features = 1;
  std::size_t conv_width = 3;
  std::size_t conv_channels = 8;
  std::size_t hidden = 32;

  std::size_t seq_features() const { return market_features + sentiment_features; }
  std::size_t lstm_inputs() const { return market_features + conv_channels; }

  friend bool operator==(const HybridDims&, const HybridDims&) = default;
};

class HybridModel {
 public:
  // Zero-initialized parameters.
  HybridModel(const HybridDims& dims, double dropout_p);

  // uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) for every layer.
  void Initialize(SeededRng& rng);

  const HybridDims& dims() const { return dims_; }
  const DropoutSpec& dropout() const { return dropout_; }
  void set_dropout(double p);

  Conv1DLayer& conv() { return conv_; }
  const Conv1DLayer& conv() const { return conv_; }
  LSTMCell& lstm() { return lstm_; }
  const LSTMCell& lstm() const { return lstm_; }
  DenseLayer& head() { return head_; }
  const DenseLayer& head() const { return head_; }

  // Fixed order: conv.kernels, conv.bias, lstm.w_x, lstm.w_h, lstm.b,
  // head.w, head.b.
  std::vector<ParamRef> Parameters();
  std::vector<const Tensor*> Parameters() const;
  std::size_t ParameterCount() const;

  friend bool operator==(const HybridModel&, const HybridModel&) = default;

 private:
  HybridDims dims_;
  DropoutSpec dropout_;
  Conv1DLayer conv_;
  LSTMCell lstm_;
  DenseLayer head_;
};

struct HybridCache {
  Tensor seq;
  Conv1DCache conv;
  Tensor conv_pre;   // [T x C_out] before relu
  LSTMCache lstm;
  Tensor dropout_mask;
  DenseCache head;
};

struct HybridGrads {
  std::vector<Tensor> params;  // same order as HybridModel::Parameters()
  Tensor d_seq;                // [T x F_seq]
  Tensor d_static;             // [F_static]
};

// Throws DimensionError when the sample does not match the model dims. `rng`
// is only drawn from in train mode with p > 0.
double HybridForward(const HybridModel& model, const Tensor& seq,
                     const Tensor& stat, Mode mode, SeededRng* rng,
                     HybridCache* cache = nullptr);
HybridGrads HybridBackward(const HybridModel& model, const HybridCache& cache,
                           double d_score);

// ---------------------------------------------------------------------------
// Linear baseline on the flattened [seq || static] vector.

struct LinearRegressionModel {
  std::size_t window = 0;
  std::size_t seq_features = 0;
  std::size_t static_features = 0;
  std::vector<double> weights;  // length window * seq_features + static_features
  double bias = 0.0;
  double lambda = 1e-8;

  std::size_t input_size() const {
    return window * seq_features + static_features;
  }

  friend bool operator==(const LinearRegressionModel&,
                         const LinearRegressionModel&) = default;
};

std::vector<double> FlattenSample(const Tensor& seq, const Tensor& stat);

// Exact direct solve of the ridge normal equations with an unpenalized
// intercept: minimizes ||Xw + b - y||^2 + lambda ||w||^2. Throws
// NumericalError if the system is singular even with the jitter.
LinearRegressionModel LinearFit(const SampleSet& samples, double lambda = 1e-8);
double LinearPredict(const LinearRegressionModel& model, const Tensor& seq,
                     const Tensor& stat);
// The objective above evaluated at the model's parameters.
double RidgeObjective(const LinearRegressionModel& model,
                      const SampleSet& samples);

// ---------------------------------------------------------------------------
// Prediction

using AnyModel = std::variant<HybridModel, LinearRegressionModel>;

struct Prediction {
  double risk_score = 0.0;
  Date date;
};

// Inference-mode scores in sample order.
std::vector<Prediction> PredictBatch(const AnyModel& model,
                                     const SampleSet& samples);
std::vector<double> PredictScores(const AnyModel& model,
                                  const SampleSet& samples);

// Raises DimensionError unless the samples fit the model.
void CheckSampleDims(const AnyModel& model, const SampleSet& samples);

std::string ModelKindName(const AnyModel& model);

}  // namespace riskcast

#endif  // RISKCAST_MODELS_H_
