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

#ifndef RISKCAST_LAYERS_H_
#define RISKCAST_LAYERS_H_

// Forward and hand-derived backward passes for the building blocks of the
// hybrid model. Forward functions fill an optional cache; the matching
// backward function must be given that same cache.

#include <cstddef>
#include <vector>

#include "riskcast/rng.h"
#include "riskcast/tensor.h"

namespace riskcast {

enum class Mode { kTrain, kInfer };

// ---------------------------------------------------------------------------
// Activations

enum class Activation { kRelu, kSigmoid, kTanh };

double Activate(Activation kind, double x);
// Derivative with respect to the input, evaluated at `x`.
double ActivationDerivative(Activation kind, double x);

Tensor Activate(Activation kind, const Tensor& x);
Tensor ActivationDerivative(Activation kind, const Tensor& x);

// ---------------------------------------------------------------------------
// 1D convolution over the time axis.
//
// Cross-correlation with valid padding:
//   y[t, c] = bias[c] + sum_{m < k} sum_{n < C_in} x[t + m, n] * kernels[c, m, n]
// Input is [T x C_in], output is [(T - k + 1) x C_out].

struct Conv1DLayer {
  Tensor kernels;  // [C_out x k x C_in]
  Tensor bias;     // [C_out]

  // Zero-initialized layer.
  static Conv1DLayer Create(std::size_t in_channels, std::size_t out_channels,
                            std::size_t width);

  std::size_t out_channels() const { return kernels.dim(0); }
  std::size_t width() const { return kernels.dim(1); }
  std::size_t in_channels() const { return kernels.dim(2); }

  // uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) with fan_in = k * C_in.
  void Initialize(SeededRng& rng);

  friend bool operator==(const Conv1DLayer&, const Conv1DLayer&) = default;
};

struct Conv1DCache {
  Tensor input;
};

struct Conv1DGrads {
  Tensor d_input;
  Tensor d_kernels;
  Tensor d_bias;
};

Tensor Conv1DForward(const Conv1DLayer& layer, const Tensor& x,
                     Conv1DCache* cache = nullptr);
Conv1DGrads Conv1DBackward(const Conv1DLayer& layer, const Conv1DCache& cache,
                           const Tensor& d_out);

// ---------------------------------------------------------------------------
// Non-overlapping max pooling along the time axis. [T x C] -> [floor(T/w) x C].
// Ties go to the earliest row; trailing rows past the last full window are
// dropped and receive zero gradient.

struct MaxPoolCache {
  Shape input_shape;
  std::vector<std::size_t> argmax;  // input row per output element
};

Tensor MaxPool1D(const Tensor& x, std::size_t window,
                 MaxPoolCache* cache = nullptr);
Tensor MaxPool1DBackward(const MaxPoolCache& cache, const Tensor& d_out);

// ---------------------------------------------------------------------------
// LSTM cell unrolled over a sequence.
//
// Gate rows are stacked in the fixed order (input i, forget f, cell g,
// output o), each block H rows tall:
//   a_t = W_x x_t + W_h h_{t-1} + b
//   i = sigmoid(a[0:H])   f = sigmoid(a[H:2H])
//   g = tanh(a[2H:3H])    o = sigmoid(a[3H:4H])
//   c_t = f * c_{t-1} + i * g
//   h_t = o * tanh(c_t)

struct LSTMCell {
  Tensor w_x;  // [4H x F]
  Tensor w_h;  // [4H x H]
  Tensor b;    // [4H]

  static LSTMCell Create(std::size_t input_size, std::size_t hidden_size);

  std::size_t hidden_size() const { return w_h.dim(1); }
  std::size_t input_size() const { return w_x.dim(1); }

  // fan_in = F + H for every gate row.
  void Initialize(SeededRng& rng);

  friend bool operator==(const LSTMCell&, const LSTMCell&) = default;
};

struct LSTMCache {
  Tensor xs;       // [T x F]
  Tensor h0;       // [H]
  Tensor c0;       // [H]
  Tensor gates;    // [T x 4H], post-activation (i, f, g, o)
  Tensor cells;    // [T x H]
  Tensor hiddens;  // [T x H]
};

struct LSTMGrads {
  Tensor d_xs;
  Tensor d_w_x;
  Tensor d_w_h;
  Tensor d_b;
};

// Returns hs [T x H].
Tensor LSTMForward(const LSTMCell& cell, const Tensor& xs, const Tensor& h0,
                   const Tensor& c0, LSTMCache* cache = nullptr);
// Full backpropagation through time. `d_hs` is dL/dh_t for every step.
LSTMGrads LSTMBackward(const LSTMCell& cell, const LSTMCache& cache,
                       const Tensor& d_hs);

// ---------------------------------------------------------------------------
// Dense affine map y = W x + b on a vector.

struct DenseLayer {
  Tensor w;  // [out x in]
  Tensor b;  // [out]

  static DenseLayer Create(std::size_t in, std::size_t out);

  std::size_t in_features() const { return w.dim(1); }
  std::size_t out_features() const { return w.dim(0); }

  void Initialize(SeededRng& rng);

  friend bool operator==(const DenseLayer&, const DenseLayer&) = default;
};

struct DenseCache {
  Tensor input;
};

struct DenseGrads {
  Tensor d_input;
  Tensor d_w;
  Tensor d_b;
};

Tensor DenseForward(const DenseLayer& layer, const Tensor& x,
                    DenseCache* cache = nullptr);
DenseGrads DenseBackward(const DenseLayer& layer, const DenseCache& cache,
                         const Tensor& d_out);

// ---------------------------------------------------------------------------
// Inverted dropout: in training each entry is zeroed with probability p and
// survivors are scaled by 1/(1-p). Inference is the exact identity.

struct DropoutSpec {
  double p = 0.0;

  // Throws ParameterError unless 0 <= p < 1.
  void Validate() const;

  friend bool operator==(const DropoutSpec&, const DropoutSpec&) = default;
};

struct DropoutResult {
  Tensor output;
  Tensor mask;  // per-entry multiplier: 0 or 1/(1-p); all ones at inference
};

DropoutResult DropoutForward(const DropoutSpec& spec, const Tensor& x,
                             SeededRng& rng, Mode mode);
Tensor DropoutBackward(const Tensor& mask, const Tensor& d_out);

}  // namespace riskcast

#endif  // RISKCAST_LAYERS_H_
