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

#include "crowdclust/inertial_hypotheses.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "crowdclust/info_estimators.hpp"

namespace crowdclust {

InertialHypotheses::InertialHypotheses(double epsilon, std::size_t ell)
    : epsilon_(epsilon), ell_(ell) {
  if (!(epsilon >= 0.0 && epsilon < 0.5)) {
    throw std::invalid_argument("InertialHypotheses: epsilon outside [0, 1/2)");
  }
  if (ell < 3 || ell > 20) throw std::invalid_argument("InertialHypotheses: ell outside [3, 20]");
  const std::uint32_t words = std::uint32_t{1} << ell;
  table_.assign(ell + 1, std::vector<double>(words));
  const double stay = 0.5 + epsilon, flip = 0.5 - epsilon;
  for (std::size_t h = 0; h <= ell; ++h) {
    for (std::uint32_t y = 0; y < words; ++y) {
      double p = h == 0 ? 0.5 : 0.25;
      int prev = -1;
      for (std::size_t k = 0; k < ell; ++k) {
        if (h == k + 1) continue;
        const int bit = static_cast<int>((y >> k) & 1u);
        if (prev >= 0) p *= bit == prev ? stay : flip;
        prev = bit;
      }
      table_[h][y] = p;
    }
  }
}

double InertialHypotheses::probability(std::size_t hypothesis, std::uint32_t y) const {
  return table_.at(hypothesis).at(y);
}

double InertialHypotheses::divergence(std::size_t i, std::size_t j) const {
  const auto& p = table_.at(i);
  const auto& q = table_.at(j);
  double sum = 0.0;
  for (std::size_t y = 0; y < p.size(); ++y) {
    if (p[y] > 0.0) sum += p[y] * std::log2(p[y] / q[y]);
  }
  return sum;
}

double closed_form_from_chain(std::size_t i, double epsilon, std::size_t ell) {
  if (i < 1 || i > ell) throw std::invalid_argument("closed_form_from_chain: i outside [1, l]");
  if (i == 1 || i == ell) return 1.0 - binary_entropy(0.5 - epsilon);
  const double e = epsilon;
  return 1.0 + (0.5 + 2 * e - 2 * e * e) * std::log2(0.5 + e) +
         (0.5 - 2 * e + 2 * e * e) * std::log2(0.5 - e);
}

double closed_form_to_chain(std::size_t i, double epsilon, std::size_t ell) {
  if (i < 1 || i > ell) throw std::invalid_argument("closed_form_to_chain: i outside [1, l]");
  const double e = epsilon;
  if (i == 1 || i == ell) return -0.5 * std::log2(1.0 - 4.0 * e * e);
  return -(0.5 - e) * std::log2(0.5 + e) - (0.5 + e) * std::log2(0.5 - e) - 1.0;
}

double AppendixCReport::max_error() const {
  double worst = 0.0;
  for (const auto& r : rows) {
    worst = std::max({worst, r.closed_form_error, r.symmetry_error, r.additivity_error});
  }
  return worst;
}

AppendixCReport verify_appendix_c(std::span<const double> epsilons,
                                  std::span<const std::size_t> ell_values) {
  AppendixCReport report;
  for (double eps : epsilons) {
    for (std::size_t ell : ell_values) {
      if (ell > 12) throw std::invalid_argument("verify_appendix_c: ell must be at most 12");
      const InertialHypotheses hyp(eps, ell);
      std::vector<std::vector<double>> d(ell + 1, std::vector<double>(ell + 1));
      for (std::size_t i = 0; i <= ell; ++i) {
        for (std::size_t j = 0; j <= ell; ++j) d[i][j] = i == j ? 0.0 : hyp.divergence(i, j);
      }
      AppendixCRow row{eps, ell, 0.0, 0.0, 0.0};
      auto reflect = [ell](std::size_t i) { return i == 0 ? 0 : ell + 1 - i; };
      for (std::size_t i = 1; i <= ell; ++i) {
        row.closed_form_error = std::max(
            {row.closed_form_error, std::abs(d[0][i] - closed_form_from_chain(i, eps, ell)),
             std::abs(d[i][0] - closed_form_to_chain(i, eps, ell))});
      }
      for (std::size_t i = 0; i <= ell; ++i) {
        for (std::size_t j = 0; j <= ell; ++j) {
          row.symmetry_error =
              std::max(row.symmetry_error, std::abs(d[i][j] - d[reflect(i)][reflect(j)]));
          const bool apart = i >= 1 && j >= 1 && (i > j ? i - j : j - i) >= 2;
          if (apart) {
            row.additivity_error =
                std::max(row.additivity_error, std::abs(d[i][j] - d[0][j] - d[i][0]));
          }
        }
      }
      report.rows.push_back(row);
    }
  }
  return report;
}

}  // namespace crowdclust
