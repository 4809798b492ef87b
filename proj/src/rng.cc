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

#include "pvqa/rng.h"

#include <cassert>
#include <limits>
#include <numeric>

#include "pvqa/error.h"

namespace pvqa {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParse: return "parse error";
    case ErrorCode::kValidation: return "validation error";
    case ErrorCode::kCapacity: return "capacity error";
    case ErrorCode::kPrecondition: return "precondition error";
    case ErrorCode::kIntegrity: return "integrity error";
    case ErrorCode::kInput: return "input error";
    case ErrorCode::kUnsupported: return "unsupported";
    case ErrorCode::kRender: return "render error";
    case ErrorCode::kIo: return "I/O error";
    case ErrorCode::kEndpoint: return "endpoint error";
  }
  return "error";
}

uint64_t MixSeed(uint64_t value) {
  uint64_t z = value + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

uint64_t DeriveSeed(uint64_t seed, uint64_t index) {
  return MixSeed(MixSeed(seed) ^ MixSeed(index ^ 0x5851f42d4c957f2dULL));
}

uint64_t DeriveSeed(uint64_t seed, std::string_view text) {
  uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return DeriveSeed(seed, hash);
}

int64_t Rng::UniformInt(int64_t lo, int64_t hi) {
  assert(lo <= hi);
  uint64_t span = static_cast<uint64_t>(hi) - static_cast<uint64_t>(lo);
  if (span == std::numeric_limits<uint64_t>::max()) {
    return static_cast<int64_t>(engine_());
  }
  uint64_t range = span + 1;
  // Rejection sampling removes modulo bias.
  uint64_t limit = std::numeric_limits<uint64_t>::max() -
                   std::numeric_limits<uint64_t>::max() % range;
  uint64_t draw;
  do {
    draw = engine_();
  } while (draw >= limit);
  return static_cast<int64_t>(static_cast<uint64_t>(lo) + draw % range);
}

size_t Rng::UniformIndex(size_t n) {
  assert(n > 0);
  return static_cast<size_t>(UniformInt(0, static_cast<int64_t>(n) - 1));
}

double Rng::UniformUnit() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::UniformReal(double lo, double hi) {
  return lo + (hi - lo) * UniformUnit();
}

size_t Rng::WeightedIndex(std::span<const double> weights) {
  assert(!weights.empty());
  double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  double target = UniformUnit() * total;
  double running = 0.0;
  for (size_t i = 0; i < weights.size(); ++i) {
    running += weights[i];
    if (target < running) return i;
  }
  return weights.size() - 1;
}

std::vector<size_t> SampleWithoutReplacement(size_t n, size_t k, Rng& rng) {
  assert(k <= n);
  std::vector<size_t> pool(n);
  std::iota(pool.begin(), pool.end(), size_t{0});
  for (size_t i = 0; i < k; ++i) {
    size_t j = i + rng.UniformIndex(n - i);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  return pool;
}

}  // namespace pvqa
