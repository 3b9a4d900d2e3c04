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

#ifndef CROWDCLUST_INERTIAL_HYPOTHESES_HPP_
#define CROWDCLUST_INERTIAL_HYPOTHESES_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace crowdclust {

// Binary hypotheses over l objects answered by one inertial worker.
// Q_0: all objects share one class, responses form a Markov chain with a
// uniform start and repeat probability 1/2 + eps.
// Q_i (1 <= i <= l): object i is the odd one out; its response is an
// independent fair bit and the chain runs over the remaining objects.
class InertialHypotheses {
 public:
  InertialHypotheses(double epsilon, std::size_t ell);

  double epsilon() const { return epsilon_; }
  std::size_t ell() const { return ell_; }

  // Probability of the response word y (bit k = response to object k + 1).
  double probability(std::size_t hypothesis, std::uint32_t y) const;

  // KL divergence D(Q_i || Q_j) in bits by summing over all 2^l words.
  double divergence(std::size_t i, std::size_t j) const;

 private:
  double epsilon_;
  std::size_t ell_;
  std::vector<std::vector<double>> table_;
};

// D(Q_0 || Q_i) and D(Q_i || Q_0) in closed form, 1 <= i <= l.
double closed_form_from_chain(std::size_t i, double epsilon, std::size_t ell);
double closed_form_to_chain(std::size_t i, double epsilon, std::size_t ell);

struct AppendixCRow {
  double epsilon = 0.0;
  std::size_t ell = 0;
  double closed_form_error = 0.0;  // max |brute force - closed form|
  double symmetry_error = 0.0;     // max |D(Q_i||Q_j) - D(Q_r(i)||Q_r(j))|, r reverses order
  double additivity_error = 0.0;   // max over |i-j| >= 2 of |D(Q_i||Q_j) - D(Q_0||Q_j) - D(Q_i||Q_0)|
};

struct AppendixCReport {
  std::vector<AppendixCRow> rows;
  double max_error() const;
  bool passed(double tolerance = 1e-9) const { return max_error() <= tolerance; }
};

AppendixCReport verify_appendix_c(std::span<const double> epsilons,
                                  std::span<const std::size_t> ell_values);

}  // namespace crowdclust

#endif  // CROWDCLUST_INERTIAL_HYPOTHESES_HPP_
