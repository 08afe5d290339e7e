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

#include "riskcast/rng.h"

#include <cmath>
#include <numbers>

#include "riskcast/error.h"

namespace riskcast {
namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t Mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t SeededRng::NextU64() {
  state_ += kGolden;
  return Mix(state_);
}

double SeededRng::Uniform01() {
  return static_cast<double>(NextU64() >> 11) * 0x1.0p-53;
}

double SeededRng::Uniform(double lo, double hi) {
  return lo + (hi - lo) * Uniform01();
}

double SeededRng::Normal(double mean, double stddev) {
  const double u1 = 1.0 - Uniform01();  // (0, 1]
  const double u2 = Uniform01();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  return mean + stddev * radius * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t SeededRng::Below(std::uint64_t n) {
  if (n == 0) throw ParameterError("Below(0) has no valid result");
  // Rejection keeps the draw unbiased.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = NextU64();
  } while (x >= limit);
  return x % n;
}

SeededRng SeededRng::Split(std::uint64_t stream) const {
  return SeededRng(Mix(state_ ^ Mix(stream + kGolden)));
}

Tensor RandomTensor(SeededRng& rng, Shape shape, const Distribution& dist) {
  Tensor out(std::move(shape));
  if (const auto* u = std::get_if<UniformDist>(&dist)) {
    if (!(u->lo <= u->hi)) {
      throw ParameterError("uniform distribution needs lo <= hi");
    }
    for (double& v : out.values()) v = rng.Uniform(u->lo, u->hi);
  } else {
    const auto& n = std::get<NormalDist>(dist);
    if (!(n.stddev >= 0.0)) {
      throw ParameterError("normal distribution needs stddev >= 0");
    }
    for (double& v : out.values()) v = rng.Normal(n.mean, n.stddev);
  }
  return out;
}

}  // namespace riskcast
