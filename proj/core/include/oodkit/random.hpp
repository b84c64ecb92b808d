// Copyright 2026 The oodkit Authors
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

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace oodkit {

// Seeded generator with platform-independent derived distributions.
//
// std::mt19937_64 is fully specified by the standard, but the standard
// distributions (uniform_real_distribution, normal_distribution, shuffle)
// are not, so everything that must be reproducible across toolchains goes
// through the helpers below.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer on [0, n) without modulo bias. n must be positive.
  std::size_t below(std::size_t n);

  // Standard normal via Box-Muller (one value per call, the pair's second
  // value is cached).
  double normal();

  bool bernoulli(double p) { return uniform() < p; }

  // Fisher-Yates.
  template <class T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      using std::swap;
      swap(items[i - 1], items[below(i)]);
    }
  }

  // Index drawn from the (unnormalised) weights; cumulative must be the
  // running sum of those weights.
  std::size_t categorical(std::span<const double> cumulative);

 private:
  std::mt19937_64 engine_;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

// Derives an independent stream seed from a base seed and a stream tag
// (splitmix64 finaliser).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

}  // namespace oodkit
