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

#ifndef CROWDCLUST_TESTS_SUPPORT_FIXTURES_HPP_
#define CROWDCLUST_TESTS_SUPPORT_FIXTURES_HPP_

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include "crowdclust/divergence.hpp"
#include "crowdclust/mi_table.hpp"
#include "crowdclust/partition.hpp"
#include "crowdclust/rng.hpp"

namespace crowdclust::testing {

inline Pmf random_positive_pmf(std::size_t size, Rng& rng) {
  std::vector<double> w(size);
  double total = 0.0;
  for (auto& x : w) total += (x = 0.02 + rng.uniform());
  for (auto& x : w) x /= total;
  return Pmf(std::move(w));
}

// Smallest and largest likelihood ratio p/q.
inline std::pair<double, double> ratio_range(const Pmf& p, const Pmf& q) {
  double r = INFINITY, R = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    r = std::min(r, p[k] / q[k]);
    R = std::max(R, p[k] / q[k]);
  }
  return {r, R};
}

// Specs whose constants are valid on the ratio range [r, R].
// Slopes: subtracting f'(1)(x - 1) does not change D_f, and a function with
// |g'| <= lambda on [r, R] gives D_f <= lambda * L1 = 2 lambda * tv.

inline FDivergenceSpec kl_on(double r, double R) {
  return FDivergenceSpec::kl(2.0 * std::max(std::abs(std::log2(r)), std::abs(std::log2(R))) + 1e-12);
}

inline FDivergenceSpec chi_square_on(double r, double R) {
  const double ln2 = std::numbers::ln2;
  const double lambda = 2.0 * std::max(std::abs(r - 1.0), std::abs(R - 1.0));
  return FDivergenceSpec::custom(
      "chi_square", [](double x) { return (x - 1.0) * (x - 1.0); }, 2.0 * r * ln2, 2.0 * R * ln2,
      2.0 * lambda + 1e-12, [](double) { return 2.0; });
}

inline FDivergenceSpec hellinger_on(double r, double R) {
  const double ln2 = std::numbers::ln2;
  const double lambda = std::max(std::abs(1.0 - 1.0 / std::sqrt(r)), std::abs(1.0 - 1.0 / std::sqrt(R)));
  return FDivergenceSpec::custom(
      "hellinger", [](double x) { return (std::sqrt(x) - 1.0) * (std::sqrt(x) - 1.0); },
      0.5 * ln2 / std::sqrt(R), 0.5 * ln2 / std::sqrt(r), 2.0 * lambda + 1e-12,
      [](double x) { return 0.5 * std::pow(x, -1.5); }, 1.0);
}

// Ordering skeleton of the exact table I(Y_i; Y_{i-1}, Y_j) for a copy
// channel: the entry through the same-class predecessor is the largest,
// earlier same-class objects carry less, other classes nothing, and a first
// occurrence sees no information at all (every entry ties).
inline MiTable structural_mi_table(const ObjectSequence& labels) {
  MiTable t(labels.size());
  for (std::size_t i = 1; i < labels.size(); ++i) {
    std::size_t pred = i;
    for (std::size_t k = i; k-- > 0;) {
      if (labels[k] == labels[i]) {
        pred = k;
        break;
      }
    }
    for (std::size_t j = 0; j < i; ++j) {
      double v = 0.0;
      if (pred == i) {
        v = 0.0;
      } else if (pred == i - 1 || j == pred) {
        v = 1.0;
      } else if (labels[j] == labels[i]) {
        v = 0.5;
      }
      t.set(i, j, v);
    }
  }
  return t;
}

// Some class ends at position p and another begins at p + 1.
inline bool adjacent_block_event(const ObjectSequence& labels) {
  const std::size_t tau = static_cast<std::size_t>(labels.tau());
  std::vector<std::size_t> first(tau + 1, labels.size()), last(tau + 1, 0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto t = static_cast<std::size_t>(labels[i]);
    first[t] = std::min(first[t], i);
    last[t] = i;
  }
  for (std::size_t p = 0; p + 1 < labels.size(); ++p) {
    if (last[static_cast<std::size_t>(labels[p])] == p &&
        first[static_cast<std::size_t>(labels[p + 1])] == p + 1) {
      return true;
    }
  }
  return false;
}

}  // namespace crowdclust::testing

#endif  // CROWDCLUST_TESTS_SUPPORT_FIXTURES_HPP_
