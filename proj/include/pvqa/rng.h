/**
 * Copyright 2026 The pvqa Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace pvqa {

// SplitMix64 finalizer. Used for all seed derivation so that derived streams
// are stable across platforms and standard library versions.
uint64_t MixSeed(uint64_t value);

// Stable hash of (seed, index); the per-item seed of item `index`.
uint64_t DeriveSeed(uint64_t seed, uint64_t index);

// FNV-1a over the bytes of `text`, then mixed with `seed`.
uint64_t DeriveSeed(uint64_t seed, std::string_view text);

// Deterministic random source. Wraps mt19937_64 but implements the integer
// and real mappings itself, since the std distributions are
// implementation-defined and would break byte-identical outputs.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t NextU64() { return engine_(); }

  // Uniform integer in [lo, hi], inclusive. Requires lo <= hi.
  int64_t UniformInt(int64_t lo, int64_t hi);

  // Uniform index in [0, n). Requires n > 0.
  size_t UniformIndex(size_t n);

  // Uniform double in [0, 1) with 53 bits of precision.
  double UniformUnit();

  // Uniform double in [lo, hi).
  double UniformReal(double lo, double hi);

  // Fisher-Yates shuffle.
  template <typename T>
  void Shuffle(std::vector<T>& values) {
    for (size_t i = values.size(); i > 1; --i) {
      size_t j = UniformIndex(i);
      std::swap(values[i - 1], values[j]);
    }
  }

  // Index drawn with probability proportional to weights[i]. Weights must
  // be positive and finite.
  size_t WeightedIndex(std::span<const double> weights);

 private:
  std::mt19937_64 engine_;
};

// k distinct values from [0, n), in draw order (partial Fisher-Yates).
std::vector<size_t> SampleWithoutReplacement(size_t n, size_t k, Rng& rng);

}  // namespace pvqa
