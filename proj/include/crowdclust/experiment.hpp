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

#ifndef CROWDCLUST_EXPERIMENT_HPP_
#define CROWDCLUST_EXPERIMENT_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "crowdclust/clusterers.hpp"
#include "crowdclust/crowd_sim.hpp"
#include "crowdclust/divergence.hpp"
#include "crowdclust/partition.hpp"

namespace crowdclust {

enum class Decoder { temp, mem, unified };
enum class SweepParam { n, ell, theta_d, theta_m };

const char* to_string(Decoder d);
const char* to_string(SweepParam p);

struct Sweep {
  SweepParam param = SweepParam::n;
  std::vector<double> values;
};

struct ExperimentPlan {
  Decoder decoder = Decoder::temp;
  int tau = 2;
  std::size_t ell = 10;
  std::vector<double> prior;  // empty = uniform
  WorkerModel model = TemporaryWorkerModel{};
  DivergenceKind divergence = DivergenceKind::total_variation;
  double kl_lipschitz = 10.0;
  ThresholdSchedule temp_schedule{1.0, 0.25, ThresholdSchedule::Branch::tv_alpha};
  ThresholdSchedule mem_schedule{0.3, 0.25, ThresholdSchedule::Branch::info_alpha};
  bool temp_c1_auto = false;
  bool mem_c1_auto = false;
  std::size_t n = 100;
  double epsilon = 0.05;
  std::optional<std::vector<std::vector<std::size_t>>> permutations;
  bool fresh_refinement_samples = false;
  Sweep sweep;
  std::size_t trials = 100;
  std::uint64_t master_seed = 1;
  // Budget grid and target for sample-complexity searches.
  std::vector<std::size_t> n_grid;
  double target_eps = 0.1;
  std::size_t calibration_trials = 20;

  void validate() const;
  FDivergenceSpec divergence_spec() const;
};

// One fully specified simulation setting.
struct TrialSetting {
  Decoder decoder = Decoder::temp;
  int tau = 2;
  std::size_t ell = 10;
  std::vector<double> prior;
  WorkerModel model;
  FDivergenceSpec spec = FDivergenceSpec::total_variation();
  ThresholdSchedule temp_schedule;
  ThresholdSchedule mem_schedule;
  std::size_t n = 100;
  double epsilon = 0.05;
  std::optional<std::vector<std::vector<std::size_t>>> permutations;
  bool fresh_refinement_samples = false;
};

// Applies one sweep value to the plan (the value replaces n, l, theta_d or theta_m).
TrialSetting instantiate(const ExperimentPlan& plan, double value);
TrialSetting instantiate(const ExperimentPlan& plan);

struct TrialOutcome {
  ObjectSequence labels;
  Partition estimate;
  Partition truth;
  // Temporary decoder: the decoded matrix. Memory decoders: the first
  // round's responses, rows in original object order.
  ResponseMatrix responses;
  bool error = false;
};

// Draws labels and responses from `seed` and decodes them.
TrialOutcome run_trial(const TrialSetting& setting, std::uint64_t seed);

// Number of erroneous trials among seeds derive_seed(base, {t}), t < trials.
// The count does not depend on `threads`.
std::size_t count_errors(const TrialSetting& setting, std::uint64_t base, std::size_t trials,
                         unsigned threads);

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

// Wilson score interval at 95%.
Interval wilson_interval(std::size_t errors, std::size_t trials);

struct SweepRow {
  std::string sweep_param;
  double value = 0.0;
  std::size_t n = 0;
  std::size_t trials = 0;
  std::size_t errors = 0;
  double p_hat = 0.0;
  Interval ci;
  std::uint64_t seed = 0;
  double wall_ms = 0.0;
};

struct Calibration {
  std::optional<double> temp_c1;
  std::optional<double> mem_c1;
  std::uint64_t seed = 0;
  // (temp c1, mem c1, errors) per candidate.
  struct Candidate {
    double temp_c1;
    double mem_c1;
    std::size_t errors;
  };
  std::vector<Candidate> candidates;
};

// Candidate constants tried when c1 is left to calibration.
inline constexpr double kCalibrationGrid[] = {0.1, 0.3, 1.0, 3.0};

// Picks c1 for every schedule marked auto by a short pre-run at the middle
// sweep value on a seed not used by the main run, and writes the choice into
// the returned plan. Among candidates with the fewest errors the median one
// (lower median) is kept.
ExperimentPlan calibrate(const ExperimentPlan& plan, Calibration* record, unsigned threads);

struct SweepResult {
  std::vector<SweepRow> rows;
  Calibration calibration;
};

SweepResult run_trials(const ExperimentPlan& plan, unsigned threads = 1);

void write_sweep_csv(std::ostream& os, const SweepResult& result, bool timing);

struct ComplexityRow {
  std::string sweep_param;
  double value = 0.0;
  std::optional<std::size_t> n_star;
  double target_eps = 0.0;
  bool monotone = true;
  std::size_t evaluations = 0;
};

struct ComplexityResult {
  std::vector<ComplexityRow> rows;
  Calibration calibration;
};

// For each sweep value, bisects over plan.n_grid for the smallest budget
// whose empirical error rate is below plan.target_eps. Evaluated points whose
// intervals show a later budget doing significantly worse are flagged.
ComplexityResult estimate_sample_complexity(const ExperimentPlan& plan, unsigned threads = 1);

void write_complexity_csv(std::ostream& os, const ComplexityResult& result);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

// Ordinary least squares y = slope x + intercept.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

// Shortest round-trip decimal form of a double.
std::string format_double(double v);

}  // namespace crowdclust

#endif  // CROWDCLUST_EXPERIMENT_HPP_
