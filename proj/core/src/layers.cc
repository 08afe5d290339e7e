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

#include "riskcast/layers.h"

#include <cmath>
#include <string>

#include "riskcast/error.h"

namespace riskcast {
namespace {

void InitUniform(Tensor& t, SeededRng& rng, std::size_t fan_in) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
  for (double& v : t.values()) v = rng.Uniform(-bound, bound);
}

void ExpectShape(const Tensor& t, const Shape& expected, const char* what) {
  if (t.shape() != expected) {
    throw DimensionError(std::string(what) + ": expected " +
                         ShapeString(expected) + ", got " +
                         ShapeString(t.shape()));
  }
}

void ExpectCacheShape(const Tensor& t, const Shape& expected, const char* what) {
  if (t.shape() != expected) {
    throw ContractError(std::string(what) + ": expected " +
                        ShapeString(expected) + ", got " +
                        ShapeString(t.shape()) +
                        " (cache/gradient does not match the forward call)");
  }
}

double Sigmoid(double x) {
  // Split form avoids overflow of exp for large |x|.
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

// ---------------------------------------------------------------------------
// Activations

double Activate(Activation kind, double x) {
  switch (kind) {
    case Activation::kRelu: return x > 0.0 ? x : 0.0;
    case Activation::kSigmoid: return Sigmoid(x);
    case Activation::kTanh: return std::tanh(x);
  }
  return x;
}

double ActivationDerivative(Activation kind, double x) {
  switch (kind) {
    case Activation::kRelu: return x > 0.0 ? 1.0 : 0.0;
    case Activation::kSigmoid: {
      const double s = Sigmoid(x);
      return s * (1.0 - s);
    }
    case Activation::kTanh: {
      const double t = std::tanh(x);
      return 1.0 - t * t;
    }
  }
  return 1.0;
}

Tensor Activate(Activation kind, const Tensor& x) {
  Tensor out = x;
  for (double& v : out.values()) v = Activate(kind, v);
  return out;
}

Tensor ActivationDerivative(Activation kind, const Tensor& x) {
  Tensor out = x;
  for (double& v : out.values()) v = ActivationDerivative(kind, v);
  return out;
}

// ---------------------------------------------------------------------------
// Conv1D

Conv1DLayer Conv1DLayer::Create(std::size_t in_channels,
                                std::size_t out_channels, std::size_t width) {
  if (in_channels == 0 || out_channels == 0 || width == 0) {
    throw ParameterError("conv1d needs k, C_in, C_out >= 1");
  }
  return Conv1DLayer{Tensor({out_channels, width, in_channels}),
                     Tensor({out_channels})};
}

void Conv1DLayer::Initialize(SeededRng& rng) {
  const std::size_t fan_in = width() * in_channels();
  InitUniform(kernels, rng, fan_in);
  InitUniform(bias, rng, fan_in);
}

Tensor Conv1DForward(const Conv1DLayer& layer, const Tensor& x,
                     Conv1DCache* cache) {
  const std::size_t k = layer.width(), c_in = layer.in_channels(),
                    c_out = layer.out_channels();
  if (x.rank() != 2 || x.dim(1) != c_in) {
    throw DimensionError("conv1d input must be [T x " + std::to_string(c_in) +
                         "], got " + ShapeString(x.shape()));
  }
  const std::size_t steps = x.dim(0);
  if (steps < k) {
    throw DimensionError("conv1d window: sequence length " +
                         std::to_string(steps) + " is shorter than kernel " +
                         std::to_string(k));
  }
  const std::size_t out_steps = steps - k + 1;
  Tensor y({out_steps, c_out});
  const double* kern = layer.kernels.data();
  for (std::size_t t = 0; t < out_steps; ++t) {
    // x rows t..t+k-1 are contiguous, as is each kernel [k x C_in].
    const double* window = x.data() + t * c_in;
    for (std::size_t c = 0; c < c_out; ++c) {
      const double* w = kern + c * k * c_in;
      double acc = layer.bias[c];
      for (std::size_t j = 0; j < k * c_in; ++j) acc += window[j] * w[j];
      y(t, c) = acc;
    }
  }
  if (cache) cache->input = x;
  return y;
}

Conv1DGrads Conv1DBackward(const Conv1DLayer& layer, const Conv1DCache& cache,
                           const Tensor& d_out) {
  const std::size_t k = layer.width(), c_in = layer.in_channels(),
                    c_out = layer.out_channels();
  const Tensor& x = cache.input;
  if (x.rank() != 2 || x.dim(1) != c_in || x.dim(0) < k) {
    throw ContractError("conv1d backward: cache input " +
                        ShapeString(x.shape()) + " does not fit the layer");
  }
  const std::size_t out_steps = x.dim(0) - k + 1;
  ExpectCacheShape(d_out, {out_steps, c_out}, "conv1d backward dL/dy");

  Conv1DGrads g{Tensor(x.shape()), Tensor(layer.kernels.shape()),
                Tensor(layer.bias.shape())};
  const double* kern = layer.kernels.data();
  for (std::size_t t = 0; t < out_steps; ++t) {
    const double* window = x.data() + t * c_in;
    double* d_window = g.d_input.data() + t * c_in;
    for (std::size_t c = 0; c < c_out; ++c) {
      const double dy = d_out(t, c);
      if (dy == 0.0) continue;
      g.d_bias[c] += dy;
      const double* w = kern + c * k * c_in;
      double* dw = g.d_kernels.data() + c * k * c_in;
      for (std::size_t j = 0; j < k * c_in; ++j) {
        dw[j] += window[j] * dy;
        d_window[j] += w[j] * dy;
      }
    }
  }
  return g;
}

// ---------------------------------------------------------------------------
// Max pooling

Tensor MaxPool1D(const Tensor& x, std::size_t window, MaxPoolCache* cache) {
  if (window == 0) throw ParameterError("maxpool window must be >= 1");
  if (x.rank() != 2) {
    throw DimensionError("maxpool input must be [T x C], got " +
                         ShapeString(x.shape()));
  }
  const std::size_t steps = x.dim(0), channels = x.dim(1);
  if (steps < window) {
    throw DimensionError("maxpool window: sequence length " +
                         std::to_string(steps) + " is shorter than window " +
                         std::to_string(window));
  }
  const std::size_t out_steps = steps / window;
  Tensor y({out_steps, channels});
  std::vector<std::size_t> argmax(out_steps * channels);
  for (std::size_t o = 0; o < out_steps; ++o) {
    for (std::size_t c = 0; c < channels; ++c) {
      std::size_t best = o * window;
      for (std::size_t r = best + 1; r < (o + 1) * window; ++r) {
        if (x(r, c) > x(best, c)) best = r;  // strict: earliest wins ties
      }
      y(o, c) = x(best, c);
      argmax[o * channels + c] = best;
    }
  }
  if (cache) {
    cache->input_shape = x.shape();
    cache->argmax = std::move(argmax);
  }
  return y;
}

Tensor MaxPool1DBackward(const MaxPoolCache& cache, const Tensor& d_out) {
  if (cache.input_shape.size() != 2 ||
      d_out.size() != cache.argmax.size() || d_out.rank() != 2 ||
      d_out.dim(1) != cache.input_shape[1]) {
    throw ContractError("maxpool backward: gradient " +
                        ShapeString(d_out.shape()) +
                        " does not match the cached forward call");
  }
  Tensor d_x(cache.input_shape);
  const std::size_t channels = d_out.dim(1);
  for (std::size_t i = 0; i < cache.argmax.size(); ++i) {
    d_x(cache.argmax[i], i % channels) += d_out[i];
  }
  return d_x;
}

// ---------------------------------------------------------------------------
// LSTM

LSTMCell LSTMCell::Create(std::size_t input_size, std::size_t hidden_size) {
  if (input_size == 0 || hidden_size == 0) {
    throw ParameterError("lstm needs F, H >= 1");
  }
  return LSTMCell{Tensor({4 * hidden_size, input_size}),
                  Tensor({4 * hidden_size, hidden_size}),
                  Tensor({4 * hidden_size})};
}

void LSTMCell::Initialize(SeededRng& rng) {
  const std::size_t fan_in = input_size() + hidden_size();
  InitUniform(w_x, rng, fan_in);
  InitUniform(w_h, rng, fan_in);
  InitUniform(b, rng, fan_in);
}

Tensor LSTMForward(const LSTMCell& cell, const Tensor& xs, const Tensor& h0,
                   const Tensor& c0, LSTMCache* cache) {
  const std::size_t hidden = cell.hidden_size(), features = cell.input_size();
  if (xs.rank() != 2 || xs.dim(1) != features) {
    throw DimensionError("lstm input must be [T x " + std::to_string(features) +
                         "], got " + ShapeString(xs.shape()));
  }
  ExpectShape(h0, {hidden}, "lstm h0");
  ExpectShape(c0, {hidden}, "lstm c0");
  const std::size_t steps = xs.dim(0), g4 = 4 * hidden;

  Tensor gates({steps, g4});
  Tensor cells({steps, hidden});
  Tensor hiddens({steps, hidden});
  std::vector<double> pre(g4);

  const double* wx = cell.w_x.data();
  const double* wh = cell.w_h.data();
  for (std::size_t t = 0; t < steps; ++t) {
    const double* x_t = xs.data() + t * features;
    const double* h_prev = t ? hiddens.data() + (t - 1) * hidden : h0.data();
    const double* c_prev = t ? cells.data() + (t - 1) * hidden : c0.data();
    for (std::size_t r = 0; r < g4; ++r) {
      double acc = cell.b[r];
      const double* wx_r = wx + r * features;
      for (std::size_t j = 0; j < features; ++j) acc += wx_r[j] * x_t[j];
      const double* wh_r = wh + r * hidden;
      for (std::size_t j = 0; j < hidden; ++j) acc += wh_r[j] * h_prev[j];
      pre[r] = acc;
    }
    double* gate_t = gates.data() + t * g4;
    double* c_t = cells.data() + t * hidden;
    double* h_t = hiddens.data() + t * hidden;
    for (std::size_t u = 0; u < hidden; ++u) {
      const double i = Sigmoid(pre[u]);
      const double f = Sigmoid(pre[hidden + u]);
      const double g = std::tanh(pre[2 * hidden + u]);
      const double o = Sigmoid(pre[3 * hidden + u]);
      gate_t[u] = i;
      gate_t[hidden + u] = f;
      gate_t[2 * hidden + u] = g;
      gate_t[3 * hidden + u] = o;
      c_t[u] = f * c_prev[u] + i * g;
      h_t[u] = o * std::tanh(c_t[u]);
    }
  }
  if (cache) {
    cache->xs = xs;
    cache->h0 = h0;
    cache->c0 = c0;
    cache->gates = std::move(gates);
    cache->cells = std::move(cells);
    cache->hiddens = hiddens;
  }
  return hiddens;
}

LSTMGrads LSTMBackward(const LSTMCell& cell, const LSTMCache& cache,
                       const Tensor& d_hs) {
  const std::size_t hidden = cell.hidden_size(), features = cell.input_size();
  const std::size_t g4 = 4 * hidden;
  if (cache.xs.rank() != 2 || cache.xs.dim(1) != features) {
    throw ContractError("lstm backward: cache was not produced by this cell");
  }
  const std::size_t steps = cache.xs.dim(0);
  ExpectCacheShape(cache.gates, {steps, g4}, "lstm backward cache gates");
  ExpectCacheShape(cache.cells, {steps, hidden}, "lstm backward cache cells");
  ExpectCacheShape(d_hs, {steps, hidden}, "lstm backward dL/dhs");

  LSTMGrads g{Tensor(cache.xs.shape()), Tensor(cell.w_x.shape()),
              Tensor(cell.w_h.shape()), Tensor(cell.b.shape())};
  std::vector<double> dh_next(hidden, 0.0), dc_next(hidden, 0.0);
  std::vector<double> da(g4);

  const double* wx = cell.w_x.data();
  const double* wh = cell.w_h.data();
  for (std::size_t t = steps; t-- > 0;) {
    const double* gate_t = cache.gates.data() + t * g4;
    const double* c_t = cache.cells.data() + t * hidden;
    const double* c_prev =
        t ? cache.cells.data() + (t - 1) * hidden : cache.c0.data();
    const double* h_prev =
        t ? cache.hiddens.data() + (t - 1) * hidden : cache.h0.data();
    const double* x_t = cache.xs.data() + t * features;

    for (std::size_t u = 0; u < hidden; ++u) {
      const double i = gate_t[u], f = gate_t[hidden + u],
                   gg = gate_t[2 * hidden + u], o = gate_t[3 * hidden + u];
      const double tanh_c = std::tanh(c_t[u]);
      const double dh = d_hs(t, u) + dh_next[u];
      const double d_o = dh * tanh_c;
      const double dc = dh * o * (1.0 - tanh_c * tanh_c) + dc_next[u];
      const double d_i = dc * gg;
      const double d_g = dc * i;
      const double d_f = dc * c_prev[u];
      dc_next[u] = dc * f;
      da[u] = d_i * i * (1.0 - i);
      da[hidden + u] = d_f * f * (1.0 - f);
      da[2 * hidden + u] = d_g * (1.0 - gg * gg);
      da[3 * hidden + u] = d_o * o * (1.0 - o);
    }

    std::fill(dh_next.begin(), dh_next.end(), 0.0);
    double* dx_t = g.d_xs.data() + t * features;
    for (std::size_t r = 0; r < g4; ++r) {
      const double a = da[r];
      if (a == 0.0) continue;
      g.d_b[r] += a;
      const double* wx_r = wx + r * features;
      double* dwx_r = g.d_w_x.data() + r * features;
      for (std::size_t j = 0; j < features; ++j) {
        dwx_r[j] += a * x_t[j];
        dx_t[j] += a * wx_r[j];
      }
      const double* wh_r = wh + r * hidden;
      double* dwh_r = g.d_w_h.data() + r * hidden;
      for (std::size_t j = 0; j < hidden; ++j) {
        dwh_r[j] += a * h_prev[j];
        dh_next[j] += a * wh_r[j];
      }
    }
  }
  return g;
}

// ---------------------------------------------------------------------------
// Dense

DenseLayer DenseLayer::Create(std::size_t in, std::size_t out) {
  if (in == 0 || out == 0) throw ParameterError("dense needs in, out >= 1");
  return DenseLayer{Tensor({out, in}), Tensor({out})};
}

void DenseLayer::Initialize(SeededRng& rng) {
  InitUniform(w, rng, in_features());
  InitUniform(b, rng, in_features());
}

Tensor DenseForward(const DenseLayer& layer, const Tensor& x,
                    DenseCache* cache) {
  ExpectShape(x, {layer.in_features()}, "dense input");
  const std::size_t in = layer.in_features(), out = layer.out_features();
  Tensor y({out});
  for (std::size_t r = 0; r < out; ++r) {
    double acc = layer.b[r];
    const double* w_r = layer.w.data() + r * in;
    for (std::size_t j = 0; j < in; ++j) acc += w_r[j] * x[j];
    y[r] = acc;
  }
  if (cache) cache->input = x;
  return y;
}

DenseGrads DenseBackward(const DenseLayer& layer, const DenseCache& cache,
                         const Tensor& d_out) {
  const std::size_t in = layer.in_features(), out = layer.out_features();
  ExpectCacheShape(cache.input, {in}, "dense backward cache input");
  ExpectCacheShape(d_out, {out}, "dense backward dL/dy");
  DenseGrads g{Tensor({in}), Tensor(layer.w.shape()), d_out};
  for (std::size_t r = 0; r < out; ++r) {
    const double dy = d_out[r];
    const double* w_r = layer.w.data() + r * in;
    double* dw_r = g.d_w.data() + r * in;
    for (std::size_t j = 0; j < in; ++j) {
      dw_r[j] = dy * cache.input[j];
      g.d_input[j] += dy * w_r[j];
    }
  }
  return g;
}

// ---------------------------------------------------------------------------
// Dropout

void DropoutSpec::Validate() const {
  if (!(p >= 0.0 && p < 1.0)) {
    throw ParameterError("dropout probability must lie in [0, 1), got " +
                         std::to_string(p));
  }
}

DropoutResult DropoutForward(const DropoutSpec& spec, const Tensor& x,
                             SeededRng& rng, Mode mode) {
  spec.Validate();
  if (mode == Mode::kInfer || spec.p == 0.0) {
    return {x, Tensor::Full(x.shape(), 1.0)};
  }
  const double keep_scale = 1.0 / (1.0 - spec.p);
  DropoutResult r{x, Tensor(x.shape())};
  for (std::size_t i = 0; i < x.size(); ++i) {
    const bool keep = rng.Uniform01() >= spec.p;
    r.mask[i] = keep ? keep_scale : 0.0;
    r.output[i] = x[i] * r.mask[i];
  }
  return r;
}

Tensor DropoutBackward(const Tensor& mask, const Tensor& d_out) {
  if (mask.shape() != d_out.shape()) {
    throw ContractError("dropout backward: mask " + ShapeString(mask.shape()) +
                        " vs gradient " + ShapeString(d_out.shape()));
  }
  return Mul(mask, d_out);
}

}  // namespace riskcast
