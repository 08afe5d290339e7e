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

#ifndef RISKCAST_RNG_H_
#define RISKCAST_RNG_H_

#include <cstdint>
#include <variant>

#include "riskcast/tensor.h"

namespace riskcast {

// SplitMix64 generator. The state advances by 0x9E3779B97F4A7C15 per draw and
// the output is the standard SplitMix64 finalizer:
//   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//   z =  z ^ (z >> 31)
// Identical seeds give identical streams on every platform.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t NextU64();

  // 53-bit uniform in [0, 1).
  double Uniform01();
  double Uniform(double lo, double hi);
  // Box-Muller, two uniforms per draw, no cached spare.
  double Normal(double mean, double stddev);
  // Uniform integer in [0, n).
  std::uint64_t Below(std::uint64_t n);

  // Independent child stream keyed by `stream`. Does not advance this
  // generator, so children can be derived in any order.
  SeededRng Split(std::uint64_t stream) const;

  std::uint64_t state() const { return state_; }

 private:
  std::uint64_t state_;
};

struct UniformDist {
  double lo = 0.0;
  double hi = 1.0;
};

struct NormalDist {
  double mean = 0.0;
  double stddev = 1.0;
};

using Distribution = std::variant<UniformDist, NormalDist>;

// Throws ParameterError for lo > hi or stddev < 0.
Tensor RandomTensor(SeededRng& rng, Shape shape, const Distribution& dist);

}  // namespace riskcast

#endif  // RISKCAST_RNG_H_
