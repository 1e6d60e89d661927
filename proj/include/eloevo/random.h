// Copyright 2026 The eloevo Authors.
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

#ifndef ELOEVO_RANDOM_H_
#define ELOEVO_RANDOM_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>

namespace eloevo {

// One SplitMix64 finalization step. Used to derive independent stream seeds
// and to turn stable hashes into uniform bits.
constexpr uint64_t SplitMix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr uint64_t HashCombine(uint64_t a, uint64_t b) {
  return SplitMix64(a ^ (SplitMix64(b) + 0x632be59bd9b4e019ULL));
}

// FNV-1a over the bytes, finalized with SplitMix64. Stable across platforms
// and builds, unlike std::hash.
uint64_t StableHash(std::string_view text, uint64_t seed = 0);

// Maps the top 53 bits onto [0, 1).
constexpr double ToUnitInterval(uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Deterministic generator for run-level decisions. All derived draws are
// implemented here instead of through <random> distributions, whose output
// is implementation-defined.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(SplitMix64(seed)) {}

  uint64_t NextU64() { return engine_(); }
  double Uniform() { return ToUnitInterval(engine_()); }
  // Uniform integer in [0, n). n must be positive.
  size_t UniformIndex(size_t n);
  bool Bernoulli(double p) { return Uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

// Box-Muller on two uniforms in [0, 1).
double NormalFromUniforms(double u1, double u2, double mean, double stddev);

}  // namespace eloevo

#endif  // ELOEVO_RANDOM_H_
