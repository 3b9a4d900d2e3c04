// Copyright 2026 The crowdclust Authors
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

#ifndef CROWDCLUST_RNG_HPP_
#define CROWDCLUST_RNG_HPP_

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <vector>

namespace crowdclust {

// SplitMix64 finalizer. Used to derive independent stream seeds from a
// master seed and a path of counters, so that results do not depend on the
// order in which streams are consumed.
std::uint64_t splitmix64(std::uint64_t x);

std::uint64_t derive_seed(std::uint64_t base,
                          std::initializer_list<std::uint64_t> path);
std::uint64_t derive_seed(std::uint64_t base, std::span<const std::uint64_t> path);

// Thin wrapper over std::mt19937_64. All variates are produced from raw
// 64-bit engine output so that sequences are identical across standard
// library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1) with 53 bits of resolution.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  bool bernoulli(double p) { return uniform() < p; }

  // Uniform integer in [0, bound); bound must be positive.
  std::size_t below(std::size_t bound);

  // Inverse-CDF draw from a probability vector. Mass is expected to sum to
  // one; rounding slack is absorbed by the last positive entry.
  std::size_t categorical(std::span<const double> mass);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

// Uniformly random permutation of {0, ..., n-1} (Fisher-Yates).
std::vector<std::size_t> random_permutation(std::size_t n, Rng& rng);

}  // namespace crowdclust

#endif  // CROWDCLUST_RNG_HPP_
