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

// Release checks. One PASS/FAIL line per criterion; exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "crowdclust/clusterers.hpp"
#include "crowdclust/config.hpp"
#include "crowdclust/crowd_sim.hpp"
#include "crowdclust/divergence.hpp"
#include "crowdclust/exact_law.hpp"
#include "crowdclust/experiment.hpp"
#include "crowdclust/inertial_hypotheses.hpp"
#include "crowdclust/info_estimators.hpp"
#include "crowdclust/rng.hpp"
#include "support/fixtures.hpp"

namespace cc = crowdclust;

namespace {

// Pinned tolerances and limits.
constexpr double kBoundSlack = 1e-9;
constexpr double kTvIdentityTol = 1e-12;
constexpr double kBiasSigmas = 5.0;
constexpr double kClosedFormTol = 1e-9;
constexpr double kTempErrorMax = 0.05;
constexpr double kMemSuccessMin = 0.95;
constexpr double kUnifiedSuccessMin = 0.90;
constexpr double kThetaExponentLo = -2.8;
constexpr double kThetaExponentHi = -1.2;
constexpr double kAdjacentSigmas = 3.0;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string config(const char* name) { return std::string(CROWDCLUST_CONFIG_DIR) + "/" + name; }

Outcome divergence_suite() {
  cc::Rng rng(1001);
  const auto tv = cc::FDivergenceSpec::total_variation();
  std::size_t failures = 0;
  double tv_gap = 0.0;
  for (int k = 0; k < 10000; ++k) {
    const std::size_t size = 2 + rng.below(5);
    const cc::Pmf p = cc::testing::random_positive_pmf(size, rng);
    const cc::Pmf q = cc::testing::random_positive_pmf(size, rng);
    const auto [r, R] = cc::testing::ratio_range(p, q);
    for (const auto& spec : {cc::testing::kl_on(r, R), cc::testing::chi_square_on(r, R),
                             cc::testing::hellinger_on(r, R)}) {
      const auto b = cc::check_bounds(spec, p, q);
      failures += !(b.pinsker_ok && b.sandwich_ok && b.lipschitz_ok);
    }
    const auto b = cc::check_bounds(tv, p, q);
    failures += !(b.pinsker_ok && b.lipschitz_ok);
    tv_gap = std::max(tv_gap, std::abs(b.f_div - 2.0 * b.tv));
  }
  std::ostringstream d;
  d << "10000 pairs x 4 generators, slack " << kBoundSlack << ", violations " << failures
    << ", max |D_tv - 2 tv| " << tv_gap;
  return {failures == 0 && tv_gap <= kTvIdentityTol, d.str()};
}

Outcome estimator_suite() {
  cc::Rng rng(1002);
  const std::size_t n = 50, trials = 10000;
  const double bound = cc::entropy_bias_bound(4, n);
  const std::vector<std::vector<double>> laws{
      {0.25, 0.25, 0.25, 0.25}, {0.4, 0.3, 0.2, 0.1}, {0.7, 0.1, 0.1, 0.1}};
  bool ok = true;
  std::ostringstream d;
  d << "bound " << bound << ";";
  for (const auto& law : laws) {
    const double truth = cc::entropy_bits(law);
    double sum = 0.0, sq = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
      std::vector<std::uint64_t> counts(4, 0);
      for (std::size_t k = 0; k < n; ++k) ++counts[rng.categorical(law)];
      const double h = cc::plugin_entropy(counts);
      sum += h;
      sq += h * h;
    }
    const double mean = sum / trials;
    const double se = std::sqrt(std::max(0.0, sq / trials - mean * mean) / trials);
    const double bias = mean - truth;  // expected negative
    ok = ok && bias <= kBiasSigmas * se && -bias <= bound + kBiasSigmas * se;
    d << " bias " << bias << " (se " << se << ")";
  }
  // I(X;Y) from a table and its transpose must agree exactly.
  std::size_t asymmetric = 0;
  for (int k = 0; k < 1000; ++k) {
    const std::size_t a = 2 + rng.below(4), b = 2 + rng.below(4);
    cc::JointCounts xy({a, b}), yx({b, a});
    for (int s = 0; s < 60; ++s) {
      const std::size_t x = rng.below(a), y = (x + rng.below(2)) % b;
      xy.add(x, y);
      yx.add(y, x);
    }
    asymmetric += cc::plugin_mi(xy) != cc::plugin_mi(yx);
  }
  d << "; asymmetric MI tables " << asymmetric;
  return {ok && asymmetric == 0, d.str()};
}

Outcome appendix_c_oracle() {
  const std::vector<double> eps{0.1, 0.25, 0.4};
  const std::vector<std::size_t> ells{4, 5, 6, 7, 8, 9, 10, 11, 12};
  const auto report = cc::verify_appendix_c(eps, ells);
  std::ostringstream d;
  d << report.rows.size() << " (eps, l) cells, max deviation " << report.max_error() << ", tol "
    << kClosedFormTol;
  return {report.passed(kClosedFormTol), d.str()};
}

Outcome partition_correctness() {
  // Threshold graph on empirical pmfs: keep draws whose empirical pmfs sit
  // inside gamma/2 balls around channels that are more than 2 gamma apart.
  cc::Rng rng(1004);
  const double theta = 0.6;
  const std::size_t n = 400;
  const cc::ThresholdSchedule sched{1.0, 0.25, cc::ThresholdSchedule::Branch::tv_alpha};
  const double gamma = sched.gamma(n);
  std::size_t accepted = 0, rejected = 0, temp_wrong = 0;
  while (accepted < 1000) {
    const int tau = 2 + static_cast<int>(rng.below(2));
    const cc::TemporaryWorkerModel model{cc::symmetric_channels(tau, theta)};
    const auto labels = cc::ObjectSequence::draw(tau, 4 + rng.below(17), {}, rng);
    const auto y = cc::sample_temporary(model, labels, n, rng.below(1u << 30));
    bool ball = true;
    for (std::size_t i = 0; i < labels.size() && ball; ++i) {
      const auto q = cc::empirical_pmf(y.row(i), y.alphabet_size());
      ball = cc::tv_distance(q, model.channels[static_cast<std::size_t>(labels[i] - 1)]) < gamma / 2.0;
    }
    if (!ball) {
      ++rejected;
      continue;
    }
    ++accepted;
    temp_wrong += cc::cluster_temp(y, cc::FDivergenceSpec::total_variation(), sched) !=
                  cc::correct_partition(labels);
  }

  std::size_t not_coarser = 0;
  const double rhos[] = {0.3, 0.6, 0.9};
  for (int k = 0; k < 200; ++k) {
    cc::MemoryWorkerModel m;
    m.tau = 2 + static_cast<int>(rng.below(2));
    m.base_channels = cc::symmetric_channels(m.tau, 0.4);
    m.variant = cc::SameClassCopy{rhos[k % 3]};
    const auto labels = cc::ObjectSequence::draw(m.tau, 3 + rng.below(8), {}, rng);
    const auto p = cc::cluster_info(cc::exact_mi_table(m, labels), 1e-9);
    not_coarser += !cc::refines(cc::correct_partition(labels), p);
  }

  cc::MemoryWorkerModel m;
  m.tau = 3;
  m.base_channels = cc::symmetric_channels(3, 0.5);
  m.variant = cc::SameClassCopy{0.6};
  const auto fa = cc::cluster_info(cc::exact_mi_table(m, cc::ObjectSequence(3, {1, 2, 2, 3, 1, 2, 3})), 1e-9);
  const auto fb = cc::cluster_info(cc::exact_mi_table(m, cc::ObjectSequence(3, {2, 3, 3, 2, 1, 3, 1})), 1e-9);
  const bool figs = fa == cc::Partition::from_one_based(7, {{1, 5}, {2, 3, 6}, {4, 7}}) &&
                    fb == cc::Partition::from_one_based(7, {{1, 4, 5, 7}, {2, 3, 6}});
  std::ostringstream d;
  d << "threshold graph wrong " << temp_wrong << "/1000 (" << rejected
    << " draws outside the balls skipped); info not coarser " << not_coarser
    << "/200; worked sequences " << fa.to_json() << " " << fb.to_json();
  return {temp_wrong == 0 && not_coarser == 0 && figs, d.str()};
}

struct Rate {
  std::size_t errors = 0;
  std::size_t trials = 0;
  double seconds = 0.0;
};

// Errors of the sweep row for `value`, with the seed that row gets in a full sweep.
Rate sweep_point(const cc::ExperimentPlan& plan, double value) {
  const auto it = std::find(plan.sweep.values.begin(), plan.sweep.values.end(), value);
  if (it == plan.sweep.values.end()) throw std::runtime_error("sweep value missing from config");
  const auto k = static_cast<std::uint64_t>(it - plan.sweep.values.begin());
  const auto start = std::chrono::steady_clock::now();
  const std::size_t e = cc::count_errors(cc::instantiate(plan, value),
                                         cc::derive_seed(plan.master_seed, {k}), plan.trials, 1);
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {e, plan.trials, s};
}

Outcome end_to_end() {
  const Rate a = sweep_point(cc::load_plan(config("temp_n_sweep.json")), 800);
  const Rate b = sweep_point(cc::load_plan(config("mem_copy.json")), 10000);
  const Rate c = sweep_point(cc::load_plan(config("unified.json")), 10000);
  const double pa = static_cast<double>(a.errors) / a.trials;
  const double sb = 1.0 - static_cast<double>(b.errors) / b.trials;
  const double sc = 1.0 - static_cast<double>(c.errors) / c.trials;
  const bool ok = pa < kTempErrorMax && sb >= kMemSuccessMin && sc >= kUnifiedSuccessMin &&
                  std::max({a.seconds, b.seconds, c.seconds}) < 300.0;
  std::ostringstream d;
  d << "(a) temp P_e " << pa << " [" << a.seconds << " s]; (b) mem success " << sb << " ["
    << b.seconds << " s]; (c) unified success " << sc << " [" << c.seconds << " s]";
  return {ok, d.str()};
}

Outcome scaling_fits() {
  std::ostringstream d;
  bool ok = true;
  {
    const auto plan = cc::load_plan(config("temp_ell_complexity.json"));
    const auto r = cc::estimate_sample_complexity(plan, 1);
    std::vector<double> x, lx, y, ly;
    d << "n*(l):";
    for (const auto& row : r.rows) {
      d << ' ' << (row.n_star ? std::to_string(*row.n_star) : "none");
      if (!row.n_star) {
        ok = false;
        continue;
      }
      x.push_back(std::log(row.value));
      lx.push_back(std::log(row.value));
      y.push_back(static_cast<double>(*row.n_star));
      ly.push_back(std::log(static_cast<double>(*row.n_star)));
    }
    if (x.size() >= 2) {
      const auto semi = cc::fit_line(x, y);
      const auto loglog = cc::fit_line(lx, ly);
      d << ", semilog slope " << semi.slope << ", log-log slope " << loglog.slope;
      ok = ok && semi.slope > 0.0 && loglog.slope < 1.0;
    }
  }
  {
    const auto plan = cc::load_plan(config("temp_theta_complexity.json"));
    const auto r = cc::estimate_sample_complexity(plan, 1);
    std::vector<double> x, y;
    d << "; n*(theta_d):";
    for (const auto& row : r.rows) {
      d << ' ' << (row.n_star ? std::to_string(*row.n_star) : "none");
      if (!row.n_star) {
        ok = false;
        continue;
      }
      x.push_back(std::log(row.value));
      y.push_back(std::log(static_cast<double>(*row.n_star)));
    }
    if (x.size() >= 2) {
      const double e = cc::fit_line(x, y).slope;
      d << ", exponent " << e << " in [" << kThetaExponentLo << ", " << kThetaExponentHi << "]";
      ok = ok && e >= kThetaExponentLo && e <= kThetaExponentHi;
    } else {
      ok = false;
    }
  }
  return {ok, d.str()};
}

Outcome adjacent_blocks() {
  const std::size_t ell = 30, draws = 10000;
  const int tau = 3;
  cc::Rng rng(1007);
  std::size_t failures = 0, disagreements = 0;
  for (std::size_t k = 0; k < draws; ++k) {
    const auto labels = cc::ObjectSequence::draw(tau, ell, {}, rng);
    const auto p = cc::cluster_info(cc::testing::structural_mi_table(labels), 1e-9);
    const bool failed = p != cc::correct_partition(labels);
    failures += failed;
    disagreements += failed != cc::testing::adjacent_block_event(labels);
  }
  const double bound = tau * (tau - 1.0) / ell;
  const double sigma = std::sqrt(bound * (1.0 - bound) / draws);
  const double freq = static_cast<double>(failures) / draws;
  std::ostringstream d;
  d << "failure frequency " << freq << " vs bound " << bound << " + " << kAdjacentSigmas << " x "
    << sigma << "; failures not explained by adjacent blocks " << disagreements;
  return {freq <= bound + kAdjacentSigmas * sigma && disagreements == 0, d.str()};
}

bool read_file(const std::string& path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream s;
  s << in.rdbuf();
  out = s.str();
  return true;
}

Outcome determinism() {
  std::ostringstream d;
  bool ok = true;
  // In process: same plan, different thread counts.
  const auto plan = cc::load_plan(config("determinism.json"));
  std::ostringstream a, b;
  cc::write_sweep_csv(a, cc::run_trials(plan, 1), false);
  cc::write_sweep_csv(b, cc::run_trials(plan, 3), false);
  ok = ok && a.str() == b.str();
  d << "in-process sweep " << (a.str() == b.str() ? "identical" : "differs");
  // Through the command-line tool, twice with one seed.
  const std::string dir = CROWDCLUST_WORK_DIR;
  std::vector<std::string> outputs;
  for (const char* tag : {"first", "second"}) {
    const std::string out = dir + "/acceptance_determinism_" + tag + ".csv";
    std::remove(out.c_str());
    const std::string cmd = std::string("\"") + CROWDCLUST_CLI + "\" sweep --config \"" +
                            config("determinism.json") + "\" --seed 99 --out \"" + out + "\"";
    if (std::system(cmd.c_str()) != 0) {
      d << "; cli run failed";
      return {false, d.str()};
    }
    std::string text;
    if (!read_file(out, text) || text.empty()) {
      d << "; cli wrote no csv";
      return {false, d.str()};
    }
    outputs.push_back(std::move(text));
  }
  ok = ok && outputs[0] == outputs[1];
  d << "; cli sweep " << (outputs[0] == outputs[1] ? "byte-identical" : "differs") << " ("
    << outputs[0].size() << " bytes)";
  return {ok, d.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"1 divergence bounds", divergence_suite},
      {"2 estimator bias and symmetry", estimator_suite},
      {"3 inertial hypothesis closed forms", appendix_c_oracle},
      {"4 partition correctness", partition_correctness},
      {"5 end-to-end recovery", end_to_end},
      {"6 sample complexity scaling", scaling_fits},
      {"7 adjacent-block failure rate", adjacent_blocks},
      {"8 determinism", determinism},
  };
  const double limits[] = {10, 30, 60, 120, 900, 1200, 60, 600};
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = s <= limits[k];
    const bool pass = o.pass && in_time;
    failed += !pass;
    std::printf("%s  %-36s %.1f s (limit %.0f s)  %s\n", pass ? "PASS" : "FAIL", criteria[k].first, s,
                limits[k], o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
