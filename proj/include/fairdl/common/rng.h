// Copyright 2026 The fairdl Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FAIRDL_COMMON_RNG_H_
#define FAIRDL_COMMON_RNG_H_

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>

namespace fairdl {

// SplitMix64 finalizer; used to derive independent streams from one seed.
uint64_t MixSeed(uint64_t seed, uint64_t tag);

// Seeded generator owned by exactly one party or component. Every stochastic
// operation in the library takes one of these by reference so that a run is a
// pure function of its master seed.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  // Stream derived from `seed` and an ordered list of tags, e.g.
  // Derive(master, {party_id, kStreamTraining}).
  static Rng Derive(uint64_t seed, std::initializer_list<uint64_t> tags);

  uint64_t NextU64() { return engine_(); }
  // Uniform in [0, 1).
  double Uniform();
  double Uniform(double low, double high);
  double Normal(double mean, double stddev);
  // Uniform in [0, n). n must be positive.
  size_t UniformIndex(size_t n);
  // Gamma(shape, 1) variate, used for Dirichlet draws.
  double Gamma(double shape);
  void FillBytes(std::span<uint8_t> out);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace fairdl

#endif  // FAIRDL_COMMON_RNG_H_
