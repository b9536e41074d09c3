// Copyright 2026 The stochpack Authors
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

#pragma once

#include <cstdint>
#include <random>

namespace stochpack {

/// Independent randomness streams. Nature's draw and the strategy's coin
/// flips never share a generator.
enum class Stream : uint64_t {
  kNature = 1,
  kStrategy = 2,
  kColoring = 3,
  kInstance = 4,
  kWitness = 5,
};

inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Child seed = hash(master, instance id, trial index, stream tag). The
/// fold is order-sensitive so (1, 2) and (2, 1) give different seeds.
inline uint64_t derive_seed(uint64_t master, uint64_t instance_id,
                            uint64_t trial, Stream stream) {
  uint64_t h = splitmix64(master);
  h = splitmix64(h ^ splitmix64(instance_id + 0x1000));
  h = splitmix64(h ^ splitmix64(trial + 0x2000));
  h = splitmix64(h ^ splitmix64(static_cast<uint64_t>(stream) + 0x3000));
  return h;
}

/// mt19937_64 with distribution code written out so that draws are
/// identical across standard library implementations.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t next() { return engine_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform01() < p; }

  /// Uniform in {0, ..., bound - 1}; bound must be positive.
  uint64_t below(uint64_t bound) {
    uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    uint64_t v;
    do {
      v = engine_();
    } while (v >= limit);
    return v % bound;
  }

  /// Uniform integer in [lo, hi].
  int64_t between(int64_t lo, int64_t hi) {
    return lo + static_cast<int64_t>(below(static_cast<uint64_t>(hi - lo) + 1));
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace stochpack
