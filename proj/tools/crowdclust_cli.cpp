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

// Command-line front end: simulate, sweep, complexity, verify-appendix-c, selftest.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "crowdclust/config.hpp"
#include "crowdclust/experiment.hpp"
#include "crowdclust/inertial_hypotheses.hpp"
#include "crowdclust/rng.hpp"
#include "crowdclust/selftest.hpp"

namespace {

using namespace crowdclust;

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kCheckFailed = 2;

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  unsigned threads = 1;
};

ExperimentPlan plan_for(const Common& c) {
  ExperimentPlan plan = load_plan(c.config);
  if (c.seed) plan.master_seed = *c.seed;
  return plan;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
}

int do_simulate(const Common& c, const std::string& responses_path, bool show_truth) {
  Calibration cal;
  const ExperimentPlan plan = calibrate(plan_for(c), &cal, c.threads);
  const TrialSetting setting =
      plan.sweep.values.empty() ? instantiate(plan) : instantiate(plan, plan.sweep.values.front());
  const TrialOutcome r = run_trial(setting, derive_seed(plan.master_seed, {0}));
  std::cout << r.estimate.to_json() << '\n';
  if (show_truth) std::cout << r.truth.to_json() << '\n';
  if (!responses_path.empty()) {
    std::ofstream f(responses_path);
    if (!f) throw std::runtime_error("cannot write " + responses_path);
    r.responses.write_csv(f);
  }
  return kOk;
}

int do_sweep(const Common& c, bool timing) {
  const ExperimentPlan plan = plan_for(c);
  const SweepResult result = run_trials(plan, c.threads);
  if (c.out.empty()) {
    write_sweep_csv(std::cout, result, timing);
  } else {
    std::ofstream f(c.out);
    if (!f) throw std::runtime_error("cannot write " + c.out);
    write_sweep_csv(f, result, timing);
    write_text(c.out + ".meta.json", calibration_to_json(result.calibration, plan));
  }
  return kOk;
}

int do_complexity(const Common& c) {
  const ExperimentPlan plan = plan_for(c);
  const ComplexityResult result = estimate_sample_complexity(plan, c.threads);
  if (c.out.empty()) {
    write_complexity_csv(std::cout, result);
  } else {
    std::ofstream f(c.out);
    if (!f) throw std::runtime_error("cannot write " + c.out);
    write_complexity_csv(f, result);
    write_text(c.out + ".meta.json", calibration_to_json(result.calibration, plan));
  }
  bool monotone = true;
  for (const auto& row : result.rows) monotone = monotone && row.monotone;
  if (!monotone) std::cerr << "warning: error rate not monotone in n for some sweep values\n";
  return kOk;
}

int do_verify(const std::vector<double>& eps, const std::vector<std::size_t>& ells) {
  const AppendixCReport report = verify_appendix_c(eps, ells);
  std::cout << "epsilon,ell,closed_form_error,symmetry_error,additivity_error\n";
  for (const auto& r : report.rows) {
    std::cout << format_double(r.epsilon) << ',' << r.ell << ',' << format_double(r.closed_form_error)
              << ',' << format_double(r.symmetry_error) << ',' << format_double(r.additivity_error)
              << '\n';
  }
  const bool ok = report.passed(1e-9);
  std::cout << (ok ? "PASS" : "FAIL") << " max deviation " << format_double(report.max_error()) << '\n';
  return ok ? kOk : kCheckFailed;
}

int do_selftest() {
  bool ok = true;
  for (const auto& r : run_selftest()) {
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << " (" << r.detail << ")\n";
    ok = ok && r.passed;
  }
  return ok ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Universal clustering of crowd responses"};
  app.require_subcommand(1);

  Common common;
  auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* opt = sub->add_option("--config", common.config, "Experiment plan (JSON)");
    if (needs_config) opt->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", common.seed, "Override the plan's master seed");
    sub->add_option("--out", common.out, "Output CSV path (stdout when omitted)");
    sub->add_option("--threads", common.threads, "Worker threads")->check(CLI::Range(1u, 1024u));
  };

  auto* simulate = app.add_subcommand("simulate", "Decode one simulated instance, print the partition");
  add_common(simulate, true);
  std::string responses_path;
  bool show_truth = false;
  simulate->add_option("--responses", responses_path, "Write the response matrix as CSV");
  simulate->add_flag("--truth", show_truth, "Also print the correct partition");

  auto* sweep = app.add_subcommand("sweep", "Run a sweep and write error rates as CSV");
  add_common(sweep, true);
  bool timing = false;
  sweep->add_flag("--timing", timing, "Record wall-clock milliseconds (output no longer reproducible)");

  auto* complexity = app.add_subcommand("complexity", "Bisect the budget grid for n*(eps)");
  add_common(complexity, true);

  auto* verify = app.add_subcommand("verify-appendix-c",
                                    "Check inertial-hypothesis divergences against closed forms");
  std::vector<double> eps{0.1, 0.25, 0.4};
  std::vector<std::size_t> ells{4, 5, 6, 7, 8, 9, 10, 11, 12};
  verify->add_option("--epsilon", eps, "Repeat probabilities minus 1/2")->delimiter(',');
  verify->add_option("--ell", ells, "Sequence lengths (at most 12)")->delimiter(',');
  add_common(verify, false);

  auto* selftest = app.add_subcommand("selftest", "Run quick invariant checks");
  add_common(selftest, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*simulate) return do_simulate(common, responses_path, show_truth);
    if (*sweep) return do_sweep(common, timing);
    if (*complexity) return do_complexity(common);
    if (*verify) return do_verify(eps, ells);
    if (*selftest) return do_selftest();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
