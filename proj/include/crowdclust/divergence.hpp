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

#ifndef CROWDCLUST_DIVERGENCE_HPP_
#define CROWDCLUST_DIVERGENCE_HPP_

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "crowdclust/partition.hpp"

namespace crowdclust {

// Probability mass function on {0, ..., size-1}.
class Pmf {
 public:
  Pmf() = default;
  // Throws unless entries are nonnegative and sum to 1 within 1e-12.
  explicit Pmf(std::vector<double> mass);

  static Pmf uniform(std::size_t size);
  static Pmf point_mass(std::size_t size, std::size_t at);

  std::size_t size() const { return mass_.size(); }
  double operator[](std::size_t k) const { return mass_[k]; }
  std::span<const double> mass() const { return mass_; }
  bool strictly_positive() const;

  std::string to_json() const;

  bool operator==(const Pmf&) const = default;

 private:
  std::vector<double> mass_;
};

Pmf empirical_pmf(std::span<const Symbol> samples, std::size_t alphabet_size);

// Half-L1 total variation distance, in [0, 1].
double tv_distance(const Pmf& p, const Pmf& q);

// D(p||q) in bits; +infinity when p puts mass outside the support of q.
double kl_divergence(const Pmf& p, const Pmf& q);

enum class DivergenceKind { total_variation, kl, custom };

// A convex normalized generator f together with the constants used by the
// comparison bounds:
//   c * D(p||q) <= D_f(p||q) <= C * D(p||q)     (D in bits)
//   kappa * tv^2 <= D_f(p||q) <= L * tv          (tv half-L1)
// Curvature constants are expressed against the base-2 KL generator, i.e.
// they bound x f''(x) ln 2 on the ratio range, which makes kappa = 2 c log2(e)
// consistent with Pinsker's inequality in bits. The KL spec has c = C = 1.
// L is the slope against half-L1 tv, which is twice the Lipschitz constant of
// f on the ratio range.
class FDivergenceSpec {
 public:
  using Function = std::function<double(double)>;

  // f(x) = |x - 1|. D_f = 2 tv exactly, so L = 2. Not twice differentiable;
  // the curvature sandwich does not apply.
  static FDivergenceSpec total_variation();
  // f(x) = x log2 x, c = C = 1; L must be supplied for the intended ratio range.
  static FDivergenceSpec kl(double L);
  // User generator. `second_derivative` is optional; a central difference is
  // used when absent. `slope_at_infinity` is lim f(x)/x (infinite when unset),
  // which fixes the contribution of cells with q = 0 < p.
  static FDivergenceSpec custom(std::string name, Function f, double c, double C, double L,
                                Function second_derivative = {},
                                std::optional<double> slope_at_infinity = std::nullopt);

  DivergenceKind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  double operator()(double x) const { return f_(x); }
  double second_derivative(double x) const;
  double slope_at_infinity() const { return slope_at_infinity_; }
  double c() const { return c_; }
  double C() const { return C_; }
  double L() const { return L_; }
  double kappa() const;

  // Samples `samples` points of [r, R] and checks x f''(x) ln 2 in [c, C].
  bool curvature_holds(double r, double R, int samples = 1000) const;

 private:
  FDivergenceSpec() = default;
  void validate() const;

  DivergenceKind kind_ = DivergenceKind::custom;
  std::string name_;
  Function f_;
  Function f2_;
  double slope_at_infinity_ = 0.0;
  double c_ = 0.0;
  double C_ = 0.0;
  double L_ = 0.0;
};

// D_f(p||q) = sum_i q_i f(p_i / q_i), with 0 f(0/0) = 0 and
// q_i = 0 < p_i contributing p_i * lim f(x)/x.
double f_divergence(const FDivergenceSpec& spec, const Pmf& p, const Pmf& q);

struct BoundReport {
  bool pinsker_ok = false;    // D(p||q) >= 2 log2(e) tv^2
  bool sandwich_ok = false;   // c D <= D_f <= C D (vacuous for total variation)
  bool lipschitz_ok = false;  // kappa tv^2 <= D_f <= L tv
  double tv = 0.0;
  double kl = 0.0;
  double f_div = 0.0;
};

// Evaluates the comparison inequalities with 1e-9 slack. Requires strictly
// positive p and q so that the ratio range is finite.
BoundReport check_bounds(const FDivergenceSpec& spec, const Pmf& p, const Pmf& q);

}  // namespace crowdclust

#endif  // CROWDCLUST_DIVERGENCE_HPP_
