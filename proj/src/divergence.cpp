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

#include "crowdclust/divergence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace crowdclust {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSlack = 1e-9;

void require_same_size(const Pmf& p, const Pmf& q, const char* who) {
  if (p.size() != q.size()) throw std::invalid_argument(std::string(who) + ": size mismatch");
}

}  // namespace

Pmf::Pmf(std::vector<double> mass) : mass_(std::move(mass)) {
  if (mass_.empty()) throw std::invalid_argument("Pmf: empty support");
  double total = 0.0;
  for (double m : mass_) {
    if (!(m >= 0.0)) throw std::invalid_argument("Pmf: negative or NaN mass");
    total += m;
  }
  if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("Pmf: mass does not sum to 1");
}

Pmf Pmf::uniform(std::size_t size) {
  return Pmf(std::vector<double>(size, 1.0 / static_cast<double>(size)));
}

Pmf Pmf::point_mass(std::size_t size, std::size_t at) {
  std::vector<double> m(size, 0.0);
  m.at(at) = 1.0;
  return Pmf(std::move(m));
}

bool Pmf::strictly_positive() const {
  return std::all_of(mass_.begin(), mass_.end(), [](double m) { return m > 0.0; });
}

std::string Pmf::to_json() const {
  std::ostringstream os;
  os.precision(17);
  os << '[';
  for (std::size_t k = 0; k < mass_.size(); ++k) os << (k ? "," : "") << mass_[k];
  os << ']';
  return os.str();
}

Pmf empirical_pmf(std::span<const Symbol> samples, std::size_t alphabet_size) {
  if (samples.empty()) throw std::invalid_argument("empirical_pmf: no samples");
  if (alphabet_size == 0) throw std::invalid_argument("empirical_pmf: empty alphabet");
  std::vector<std::size_t> counts(alphabet_size, 0);
  for (Symbol s : samples) {
    if (s >= alphabet_size) throw std::invalid_argument("empirical_pmf: symbol outside alphabet");
    ++counts[s];
  }
  std::vector<double> mass(alphabet_size);
  const double n = static_cast<double>(samples.size());
  for (std::size_t k = 0; k < alphabet_size; ++k) mass[k] = static_cast<double>(counts[k]) / n;
  // Integer counts over n always sum to 1 up to rounding well inside 1e-12.
  return Pmf(std::move(mass));
}

double tv_distance(const Pmf& p, const Pmf& q) {
  require_same_size(p, q, "tv_distance");
  double s = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) s += std::abs(p[k] - q[k]);
  return 0.5 * s;
}

double kl_divergence(const Pmf& p, const Pmf& q) {
  require_same_size(p, q, "kl_divergence");
  double s = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (p[k] == 0.0) continue;
    if (q[k] == 0.0) return kInf;
    s += p[k] * std::log2(p[k] / q[k]);
  }
  return std::max(s, 0.0);
}

FDivergenceSpec FDivergenceSpec::total_variation() {
  FDivergenceSpec s;
  s.kind_ = DivergenceKind::total_variation;
  s.name_ = "total_variation";
  s.f_ = [](double x) { return std::abs(x - 1.0); };
  s.f2_ = [](double) { return 0.0; };
  s.slope_at_infinity_ = 1.0;
  s.L_ = 2.0;
  s.validate();
  return s;
}

FDivergenceSpec FDivergenceSpec::kl(double L) {
  FDivergenceSpec s;
  s.kind_ = DivergenceKind::kl;
  s.name_ = "kl";
  s.f_ = [](double x) { return x > 0.0 ? x * std::log2(x) : 0.0; };
  s.f2_ = [](double x) { return std::numbers::log2e / x; };
  s.slope_at_infinity_ = kInf;
  s.c_ = 1.0;
  s.C_ = 1.0;
  s.L_ = L;
  s.validate();
  return s;
}

FDivergenceSpec FDivergenceSpec::custom(std::string name, Function f, double c, double C,
                                        double L, Function second_derivative,
                                        std::optional<double> slope_at_infinity) {
  if (!f) throw std::invalid_argument("FDivergenceSpec: missing generator");
  FDivergenceSpec s;
  s.kind_ = DivergenceKind::custom;
  s.name_ = std::move(name);
  s.f_ = std::move(f);
  s.f2_ = std::move(second_derivative);
  s.slope_at_infinity_ = slope_at_infinity.value_or(kInf);
  s.c_ = c;
  s.C_ = C;
  s.L_ = L;
  s.validate();
  return s;
}

void FDivergenceSpec::validate() const {
  if (std::abs(f_(1.0)) > 1e-12) {
    throw std::invalid_argument("FDivergenceSpec: generator is not normalized (f(1) != 0)");
  }
  if (kind_ != DivergenceKind::total_variation) {
    if (!(c_ > 0.0 && c_ <= C_ && std::isfinite(C_))) {
      throw std::invalid_argument("FDivergenceSpec: need 0 < c <= C < inf");
    }
  }
  if (!(L_ > 0.0 && std::isfinite(L_))) {
    throw std::invalid_argument("FDivergenceSpec: need 0 < L < inf");
  }
}

double FDivergenceSpec::second_derivative(double x) const {
  if (f2_) return f2_(x);
  const double h = 1e-4 * std::max(1.0, std::abs(x));
  const double lo = std::max(x - h, 0.0);
  const double hi = lo + 2.0 * h;
  const double mid = lo + h;
  return (f_(hi) - 2.0 * f_(mid) + f_(lo)) / (h * h);
}

double FDivergenceSpec::kappa() const { return 2.0 * c_ * std::numbers::log2e; }

bool FDivergenceSpec::curvature_holds(double r, double R, int samples) const {
  if (!(r > 0.0 && r <= R && std::isfinite(R)) || samples < 2) {
    throw std::invalid_argument("curvature_holds: need 0 < r <= R < inf and >= 2 samples");
  }
  for (int k = 0; k < samples; ++k) {
    const double x = r + (R - r) * static_cast<double>(k) / (samples - 1);
    const double v = x * second_derivative(x) * std::numbers::ln2;
    if (v < c_ - kSlack || v > C_ + kSlack) return false;
  }
  return true;
}

double f_divergence(const FDivergenceSpec& spec, const Pmf& p, const Pmf& q) {
  require_same_size(p, q, "f_divergence");
  double s = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (q[k] > 0.0) {
      s += q[k] * spec(p[k] / q[k]);
    } else if (p[k] > 0.0) {
      if (std::isinf(spec.slope_at_infinity())) return kInf;
      s += p[k] * spec.slope_at_infinity();
    }
  }
  return std::max(s, 0.0);
}

BoundReport check_bounds(const FDivergenceSpec& spec, const Pmf& p, const Pmf& q) {
  require_same_size(p, q, "check_bounds");
  if (!p.strictly_positive() || !q.strictly_positive()) {
    throw std::invalid_argument("check_bounds: pmfs must be strictly positive");
  }
  BoundReport r;
  r.tv = tv_distance(p, q);
  r.kl = kl_divergence(p, q);
  r.f_div = f_divergence(spec, p, q);
  const double tv2 = r.tv * r.tv;
  r.pinsker_ok = r.kl + kSlack >= 2.0 * std::numbers::log2e * tv2;
  if (spec.kind() == DivergenceKind::total_variation) {
    r.sandwich_ok = true;
  } else {
    r.sandwich_ok = spec.c() * r.kl <= r.f_div + kSlack && r.f_div <= spec.C() * r.kl + kSlack;
  }
  r.lipschitz_ok = spec.kappa() * tv2 <= r.f_div + kSlack && r.f_div <= spec.L() * r.tv + kSlack;
  return r;
}

}  // namespace crowdclust
