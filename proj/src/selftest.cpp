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

#include "crowdclust/selftest.hpp"

#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "crowdclust/clusterers.hpp"
#include "crowdclust/crowd_sim.hpp"
#include "crowdclust/divergence.hpp"
#include "crowdclust/exact_law.hpp"
#include "crowdclust/experiment.hpp"
#include "crowdclust/inertial_hypotheses.hpp"
#include "crowdclust/info_estimators.hpp"
#include "crowdclust/rng.hpp"

namespace crowdclust {

namespace {

Pmf random_positive_pmf(std::size_t size, Rng& rng) {
  std::vector<double> w(size);
  double total = 0.0;
  for (auto& x : w) total += (x = 0.05 + rng.uniform());
  for (auto& x : w) x /= total;
  return Pmf(std::move(w));
}

SelftestResult divergence_bounds() {
  Rng rng(11);
  const auto tv = FDivergenceSpec::total_variation();
  std::size_t bad = 0;
  double worst_tv_gap = 0.0;
  for (int k = 0; k < 2000; ++k) {
    const std::size_t size = 2 + rng.below(5);
    const Pmf p = random_positive_pmf(size, rng), q = random_positive_pmf(size, rng);
    const auto r = check_bounds(tv, p, q);
    if (!r.pinsker_ok || !r.lipschitz_ok) ++bad;
    worst_tv_gap = std::max(worst_tv_gap, std::abs(r.f_div - 2.0 * r.tv));
  }
  std::ostringstream d;
  d << bad << " violations, max |D_tv - 2 tv| = " << worst_tv_gap;
  return {"divergence bounds", bad == 0 && worst_tv_gap <= 1e-12, d.str()};
}

SelftestResult entropy_bias() {
  Rng rng(12);
  const std::vector<double> law{0.4, 0.3, 0.2, 0.1};
  double truth = 0.0;
  for (double p : law) truth -= p * std::log2(p);
  const std::size_t n = 50, trials = 4000;
  double sum = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    std::vector<std::uint64_t> counts(4, 0);
    for (std::size_t k = 0; k < n; ++k) ++counts[rng.categorical(law)];
    sum += plugin_entropy(counts);
  }
  const double bias = truth - sum / trials;
  std::ostringstream d;
  d << "bias " << bias << " bound " << entropy_bias_bound(4, n);
  return {"plug-in entropy bias", bias > 0.0 && bias <= entropy_bias_bound(4, n), d.str()};
}

SelftestResult appendix_c() {
  const std::vector<double> eps{0.1, 0.25, 0.4};
  const std::vector<std::size_t> ells{4, 6, 8};
  const auto report = verify_appendix_c(eps, ells);
  std::ostringstream d;
  d << "max deviation " << report.max_error();
  return {"inertial hypothesis divergences", report.passed(1e-9), d.str()};
}

SelftestResult two_worked_sequences() {
  MemoryWorkerModel m;
  m.tau = 3;
  m.base_channels = symmetric_channels(3, 0.5);
  m.variant = SameClassCopy{0.6};
  const ObjectSequence a(3, {1, 2, 2, 3, 1, 2, 3});
  const ObjectSequence b(3, {2, 3, 3, 2, 1, 3, 1});
  const Partition pa = cluster_info(exact_mi_table(m, a), 1e-9);
  const Partition pb = cluster_info(exact_mi_table(m, b), 1e-9);
  const bool ok = pa == Partition::from_one_based(7, {{1, 5}, {2, 3, 6}, {4, 7}}) &&
                  pb == Partition::from_one_based(7, {{1, 4, 5, 7}, {2, 3, 6}});
  return {"information clustering on exact tables", ok, pa.to_json() + " " + pb.to_json()};
}

SelftestResult marginal_invariance() {
  MemoryWorkerModel m;
  m.tau = 3;
  m.base_channels = symmetric_channels(3, 0.4);
  m.variant = SameClassCopy{0.7};
  const ObjectSequence labels(3, {2, 1, 2, 3, 3, 1, 2, 2});
  const ExactLaw law = exact_response_law(m, labels);
  double worst = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const Pmf& q = m.base_channels[static_cast<std::size_t>(labels[i] - 1)];
    for (std::size_t y = 0; y < q.size(); ++y) worst = std::max(worst, std::abs(law.marginals[i][y] - q[y]));
  }
  std::ostringstream d;
  d << "max marginal deviation " << worst;
  return {"copy channel marginals", worst <= 1e-12, d.str()};
}

SelftestResult reproducibility() {
  ExperimentPlan plan;
  plan.tau = 2;
  plan.ell = 12;
  MemoryWorkerModel m;
  m.tau = 2;
  m.base_channels = symmetric_channels(2, 0.2);
  m.variant = SameClassCopy{0.6};
  plan.model = m;
  plan.decoder = Decoder::unified;
  plan.n = 200;
  const TrialSetting s = instantiate(plan);
  const auto a = run_trial(s, 99), b = run_trial(s, 99);
  const std::size_t e1 = count_errors(s, 5, 8, 1), e2 = count_errors(s, 5, 8, 3);
  return {"seeded reproducibility", a.estimate == b.estimate && e1 == e2,
          "errors " + std::to_string(e1) + " vs " + std::to_string(e2)};
}

}  // namespace

std::vector<SelftestResult> run_selftest() {
  const std::vector<std::pair<const char*, std::function<SelftestResult()>>> checks{
      {"divergence bounds", divergence_bounds},
      {"plug-in entropy bias", entropy_bias},
      {"inertial hypothesis divergences", appendix_c},
      {"information clustering on exact tables", two_worked_sequences},
      {"copy channel marginals", marginal_invariance},
      {"seeded reproducibility", reproducibility},
  };
  std::vector<SelftestResult> out;
  for (const auto& [name, check] : checks) {
    try {
      out.push_back(check());
    } catch (const std::exception& e) {
      out.push_back({name, false, std::string("threw: ") + e.what()});
    }
  }
  return out;
}

}  // namespace crowdclust
