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

#include "crowdclust/info_estimators.hpp"

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "crowdclust/rng.hpp"

namespace crowdclust {
namespace {

double true_entropy(const std::vector<double>& p) {
  double h = 0.0;
  for (double x : p) {
    if (x > 0) h -= x * std::log2(x);
  }
  return h;
}

TEST(PluginEntropy, Examples) {
  EXPECT_DOUBLE_EQ(plugin_entropy(JointCounts({2}, {4, 0})), 0.0);
  EXPECT_DOUBLE_EQ(plugin_entropy(JointCounts({2}, {2, 2})), 1.0);
  EXPECT_NEAR(plugin_entropy(JointCounts({3}, {1, 1, 2})), 1.5, 1e-15);
  const std::vector<std::uint64_t> empty{0, 0};
  EXPECT_THROW(plugin_entropy(empty), std::invalid_argument);
}

TEST(PluginEntropy, BoundedByLogAlphabet) {
  Rng rng(31);
  for (int t = 0; t < 1000; ++t) {
    std::vector<std::uint64_t> c(1 + rng.below(8));
    for (auto& x : c) x = rng.below(20);
    c[0] += 1;
    const double h = plugin_entropy(c);
    ASSERT_GE(h, 0.0);
    ASSERT_LE(h, std::log2(static_cast<double>(c.size())) + 1e-12);
  }
}

TEST(PluginMi, Examples) {
  EXPECT_DOUBLE_EQ(plugin_mi(JointCounts({2, 2}, {1, 1, 1, 1})), 0.0);
  EXPECT_NEAR(plugin_mi(JointCounts({2, 2}, {2, 0, 0, 2})), 1.0, 1e-15);
  // Y = X with counts (3, 1): the information is H(X) = h(1/4).
  EXPECT_NEAR(plugin_mi(JointCounts({2, 2}, {3, 0, 0, 1})), 0.8112781244591328, 1e-12);
}

TEST(PluginMi, SymmetricAndBounded) {
  Rng rng(32);
  for (int t = 0; t < 2000; ++t) {
    const std::size_t a = 2 + rng.below(3), b = 2 + rng.below(3);
    std::vector<std::uint64_t> cells(a * b), transposed(a * b);
    for (auto& x : cells) x = rng.below(6);
    cells[0] += 1;
    for (std::size_t i = 0; i < a; ++i) {
      for (std::size_t j = 0; j < b; ++j) transposed[j * a + i] = cells[i * b + j];
    }
    const JointCounts xy({a, b}, cells), yx({b, a}, transposed);
    ASSERT_EQ(plugin_mi(xy), plugin_mi(yx));
    const std::size_t first[] = {0}, second[] = {1};
    ASSERT_GE(plugin_mi(xy), 0.0);
    ASSERT_LE(plugin_mi(xy), std::min(plugin_entropy(xy.marginal(first)),
                                      plugin_entropy(xy.marginal(second))) + 1e-12);
  }
}

TEST(PluginTripleMi, FlatteningAndDataProcessing) {
  // Coordinate 1 independent of (2, 3).
  JointCounts indep({2, 2, 2});
  for (std::size_t a = 0; a < 2; ++a) {
    for (std::size_t b = 0; b < 2; ++b) {
      for (std::size_t c = 0; c < 2; ++c) indep.add(a, b, c);
    }
  }
  EXPECT_NEAR(plugin_triple_mi(indep), 0.0, 1e-15);

  // Coordinate 1 copies coordinate 3.
  Rng rng(33);
  JointCounts copy({3, 3, 3});
  for (int k = 0; k < 500; ++k) {
    const std::size_t z = rng.below(3), y = rng.below(3);
    copy.add(z, y, z);
  }
  const std::size_t first[] = {0};
  EXPECT_NEAR(plugin_triple_mi(copy), plugin_entropy(copy.marginal(first)), 1e-12);

  // Never below the MI with coordinate 3 alone.
  for (int t = 0; t < 500; ++t) {
    JointCounts c({2, 3, 2});
    for (int k = 0; k < 40; ++k) c.add(rng.below(2), rng.below(3), rng.below(2));
    const std::size_t keep[] = {0, 2};
    ASSERT_GE(plugin_triple_mi(c) + 1e-12, plugin_mi(c.marginal(keep)));
    ASSERT_NEAR(plugin_triple_mi(c), plugin_mi(c.merge_trailing()), 0.0);
  }
}

TEST(BinaryEntropy, Values) {
  EXPECT_DOUBLE_EQ(binary_entropy(0.5), 1.0);
  EXPECT_DOUBLE_EQ(binary_entropy(0.0), 0.0);
  EXPECT_DOUBLE_EQ(binary_entropy(1.0), 0.0);
  EXPECT_NEAR(binary_entropy(0.25), 0.8112781244591328, 1e-15);
  EXPECT_THROW(binary_entropy(1.5), std::invalid_argument);
  for (double p : {0.01, 0.1, 0.3, 0.49}) EXPECT_NEAR(inverse_binary_entropy(binary_entropy(p)), p, 1e-10);
}

TEST(EntropyBiasBound, Values) {
  EXPECT_DOUBLE_EQ(entropy_bias_bound(1, 17), 0.0);
  EXPECT_DOUBLE_EQ(entropy_bias_bound(2, 1), 1.0);
  EXPECT_NEAR(entropy_bias_bound(4, 300), 0.014355292977070041, 1e-15);
}

TEST(PluginEntropy, NegativeBiasWithinBound) {
  Rng rng(34);
  const std::vector<double> law{0.4, 0.3, 0.2, 0.1};
  const double h = true_entropy(law);
  const std::size_t n = 50, trials = 10000;
  double sum = 0.0, sum2 = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    std::vector<std::uint64_t> c(4, 0);
    for (std::size_t k = 0; k < n; ++k) ++c[rng.categorical(law)];
    const double e = plugin_entropy(c);
    sum += e;
    sum2 += e * e;
  }
  const double mean = sum / trials;
  const double se = std::sqrt((sum2 / trials - mean * mean) / trials);
  EXPECT_LT(mean + 5 * se, h);
  EXPECT_LE(h - mean, entropy_bias_bound(4, n) + 5 * se);
}

TEST(PluginEntropy, ConsistentAtLargeN) {
  Rng rng(35);
  const std::vector<double> law{0.05, 0.1, 0.15, 0.2, 0.1, 0.1, 0.2, 0.1};
  const double h = true_entropy(law);
  std::size_t close = 0;
  const std::size_t trials = 1000, n = 100000;
  for (std::size_t t = 0; t < trials; ++t) {
    std::vector<std::uint64_t> c(law.size(), 0);
    for (std::size_t k = 0; k < n; ++k) ++c[rng.categorical(law)];
    close += std::abs(plugin_entropy(c) - h) < 0.01;
  }
  EXPECT_GE(close, 990u);
}

TEST(PluginTripleMi, ConditionallyIndependentThirdCoordinateAddsNothing) {
  // X2 ~ uniform, X1 = noisy copy of X2, X3 = noisy copy of X2 (independent noise).
  Rng rng(36);
  JointCounts c({2, 2, 2});
  for (int k = 0; k < 100000; ++k) {
    const std::size_t x2 = rng.below(2);
    const std::size_t x1 = rng.bernoulli(0.8) ? x2 : 1 - x2;
    const std::size_t x3 = rng.bernoulli(0.7) ? x2 : 1 - x2;
    c.add(x1, x2, x3);
  }
  const std::size_t keep[] = {0, 1};
  EXPECT_NEAR(plugin_triple_mi(c), plugin_mi(c.marginal(keep)), 0.02);
  EXPECT_NEAR(plugin_mi(c.marginal(keep)), 1.0 - binary_entropy(0.2), 0.02);
}

TEST(PluginMi, ConcentrationSanity) {
  // Deviation frequency must stay below the exponential bound with
  // c = (32 max(|X|,|Y|)^2 log 2)^-1.
  Rng rng(37);
  const std::vector<double> joint{0.3, 0.2, 0.1, 0.4};
  double truth = 0.0;
  {
    const double px[] = {0.5, 0.5}, py[] = {0.4, 0.6};
    for (std::size_t a = 0; a < 2; ++a) {
      for (std::size_t b = 0; b < 2; ++b) truth += joint[a * 2 + b] * std::log2(joint[a * 2 + b] / (px[a] * py[b]));
    }
  }
  const std::size_t n = 1000, trials = 2000;
  for (double eps : {0.1, 0.2}) {
    std::size_t dev = 0;
    for (std::size_t t = 0; t < trials; ++t) {
      JointCounts c({2, 2});
      for (std::size_t k = 0; k < n; ++k) {
        const std::size_t cell = rng.categorical(joint);
        c.add(cell / 2, cell % 2);
      }
      dev += std::abs(plugin_mi(c) - truth) >= eps;
    }
    const double ctilde = 1.0 / (32.0 * 4.0 * std::log(2.0));
    const double bound = 6.0 * std::pow(n + 1.0, 4.0) * std::exp(-ctilde * n * eps * eps);
    EXPECT_LE(static_cast<double>(dev) / trials, std::min(1.0, bound));
  }
}

}  // namespace
}  // namespace crowdclust
