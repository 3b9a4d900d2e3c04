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

#include "crowdclust/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "crowdclust/rng.hpp"

namespace crowdclust {

namespace {

constexpr std::uint64_t kCalibrationStream = 0xCA11B;

std::size_t as_count(double v, const char* what) {
  if (!(v >= 1.0) || v != std::floor(v) || v > 1e12) {
    throw std::invalid_argument(std::string(what) + " must be a positive integer");
  }
  return static_cast<std::size_t>(v);
}

void check_increasing(const std::vector<double>& values) {
  for (std::size_t k = 1; k < values.size(); ++k) {
    if (!(values[k] > values[k - 1])) throw std::invalid_argument("sweep values must be strictly increasing");
  }
}

}  // namespace

const char* to_string(Decoder d) {
  switch (d) {
    case Decoder::temp: return "temp";
    case Decoder::mem: return "mem";
    case Decoder::unified: return "unified";
  }
  return "?";
}

const char* to_string(SweepParam p) {
  switch (p) {
    case SweepParam::n: return "n";
    case SweepParam::ell: return "ell";
    case SweepParam::theta_d: return "theta_d";
    case SweepParam::theta_m: return "theta_m";
  }
  return "?";
}

FDivergenceSpec ExperimentPlan::divergence_spec() const {
  switch (divergence) {
    case DivergenceKind::total_variation: return FDivergenceSpec::total_variation();
    case DivergenceKind::kl: return FDivergenceSpec::kl(kl_lipschitz);
    case DivergenceKind::custom: break;
  }
  throw std::invalid_argument("ExperimentPlan: divergence must be tv or kl");
}

void ExperimentPlan::validate() const {
  if (trials < 1) throw std::invalid_argument("ExperimentPlan: trials must be >= 1");
  if (model_tau(model) != tau) throw std::invalid_argument("ExperimentPlan: model tau differs from tau");
  if (!prior.empty() && prior.size() != static_cast<std::size_t>(tau)) {
    throw std::invalid_argument("ExperimentPlan: prior needs tau entries");
  }
  check_increasing(sweep.values);
  std::vector<double> grid(n_grid.begin(), n_grid.end());
  check_increasing(grid);
  if (!(target_eps > 0.0 && target_eps < 1.0)) throw std::invalid_argument("ExperimentPlan: target_eps outside (0,1)");
  const auto spec = divergence_spec();
  const bool tv = spec.kind() == DivergenceKind::total_variation;
  if (decoder != Decoder::mem) {
    temp_schedule.validate();
    if (tv != (temp_schedule.branch == ThresholdSchedule::Branch::tv_alpha) ||
        temp_schedule.branch == ThresholdSchedule::Branch::info_alpha) {
      throw std::invalid_argument("ExperimentPlan: temp schedule branch does not match divergence");
    }
  }
  if (decoder != Decoder::temp) {
    mem_schedule.validate();
    if (mem_schedule.branch != ThresholdSchedule::Branch::info_alpha) {
      throw std::invalid_argument("ExperimentPlan: mem schedule must use the info_alpha branch");
    }
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("ExperimentPlan: epsilon outside (0,1)");
  }
  // Instantiating every point surfaces infeasible combinations early.
  if (sweep.values.empty()) {
    instantiate(*this);
  } else {
    for (double v : sweep.values) instantiate(*this, v);
  }
}

TrialSetting instantiate(const ExperimentPlan& plan) {
  TrialSetting s;
  s.decoder = plan.decoder;
  s.tau = plan.tau;
  s.ell = plan.ell;
  s.prior = plan.prior;
  s.model = plan.model;
  s.spec = plan.divergence_spec();
  s.temp_schedule = plan.temp_schedule;
  s.mem_schedule = plan.mem_schedule;
  s.n = plan.n;
  s.epsilon = plan.epsilon;
  s.permutations = plan.permutations;
  s.fresh_refinement_samples = plan.fresh_refinement_samples;
  if (s.n == 0) throw std::invalid_argument("ExperimentPlan: n must be >= 1");
  if (s.ell == 0) throw std::invalid_argument("ExperimentPlan: ell must be >= 1");
  if (s.decoder != Decoder::temp && !s.permutations) {
    permutation_rounds(s.ell, s.tau, s.epsilon);  // throws unless l > tau^2
  }
  std::visit([](const auto& m) { m.validate(); }, s.model);
  return s;
}

TrialSetting instantiate(const ExperimentPlan& plan, double value) {
  ExperimentPlan p = plan;
  switch (plan.sweep.param) {
    case SweepParam::n:
      p.n = as_count(value, "n");
      break;
    case SweepParam::ell:
      p.ell = as_count(value, "ell");
      if (p.permutations) throw std::invalid_argument("ExperimentPlan: fixed permutations cannot follow an ell sweep");
      break;
    case SweepParam::theta_d: {
      auto channels = symmetric_channels(plan.tau, value);
      if (auto* temp = std::get_if<TemporaryWorkerModel>(&p.model)) {
        temp->channels = std::move(channels);
      } else {
        auto& mem = std::get<MemoryWorkerModel>(p.model);
        if (!std::holds_alternative<SameClassCopy>(mem.variant) &&
            !std::holds_alternative<FullMarkov>(mem.variant)) {
          throw std::invalid_argument("ExperimentPlan: theta_d sweeps need channels the model uses");
        }
        mem.base_channels = std::move(channels);
      }
      break;
    }
    case SweepParam::theta_m: {
      auto* mem = std::get_if<MemoryWorkerModel>(&p.model);
      if (mem == nullptr) throw std::invalid_argument("ExperimentPlan: theta_m sweeps need a memory model");
      if (std::holds_alternative<InertialCopy>(mem->variant)) {
        mem->variant = InertialCopy::for_memory_quality(value);
      } else if (const auto* u = std::get_if<UnifiedConverse>(&mem->variant)) {
        mem->variant = UnifiedConverse::solve(u->p, value);
      } else {
        throw std::invalid_argument("ExperimentPlan: theta_m sweeps need the inertial or unified channel");
      }
      break;
    }
  }
  p.sweep.values.clear();
  return instantiate(p);
}

TrialOutcome run_trial(const TrialSetting& s, std::uint64_t seed) {
  Rng rng(derive_seed(seed, {0}));
  ObjectSequence labels = ObjectSequence::draw(s.tau, s.ell, s.prior, rng);
  Partition truth = correct_partition(labels);
  Partition estimate;
  ResponseMatrix responses;
  switch (s.decoder) {
    case Decoder::temp: {
      responses = sample_responses(s.model, labels, s.n, derive_seed(seed, {1}));
      estimate = cluster_temp(responses, s.spec, s.temp_schedule);
      break;
    }
    case Decoder::mem: {
      const SimulatedCrowd crowd(s.model, labels);
      MemOptions opt;
      opt.permutations = s.permutations;
      MemResult r = cluster_mem(crowd, s.tau, s.n, s.epsilon, s.mem_schedule, derive_seed(seed, {2}), opt);
      estimate = std::move(r.partition);
      responses = std::move(r.first_round_responses);
      break;
    }
    case Decoder::unified: {
      const SimulatedCrowd crowd(s.model, labels);
      UnifiedOptions opt;
      opt.mem.permutations = s.permutations;
      opt.fresh_samples = s.fresh_refinement_samples;
      UnifiedResult r = cluster_unified(crowd, s.tau, s.n, s.epsilon, s.spec, s.mem_schedule,
                                        s.temp_schedule, derive_seed(seed, {2}), opt);
      estimate = std::move(r.partition);
      responses = std::move(r.responses);
      break;
    }
  }
  const bool error = clustering_error(estimate, truth);
  return TrialOutcome{std::move(labels), std::move(estimate), std::move(truth), std::move(responses),
                      error};
}

std::size_t count_errors(const TrialSetting& setting, std::uint64_t base, std::size_t trials,
                         unsigned threads) {
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> errors{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    try {
      for (std::size_t t = next++; t < trials; t = next++) {
        if (run_trial(setting, derive_seed(base, {t})).error) ++errors;
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = trials;
    }
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(trials)));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return errors;
}

Interval wilson_interval(std::size_t errors, std::size_t trials) {
  if (trials == 0) throw std::invalid_argument("wilson_interval: no trials");
  if (errors > trials) throw std::invalid_argument("wilson_interval: errors exceed trials");
  constexpr double z = 1.959963984540054;
  const double nt = static_cast<double>(trials);
  const double p = static_cast<double>(errors) / nt;
  const double denom = 1.0 + z * z / nt;
  const double centre = (p + z * z / (2.0 * nt)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / nt + z * z / (4.0 * nt * nt)) / denom;
  return Interval{std::max(0.0, std::min(p, centre - half)), std::min(1.0, std::max(p, centre + half))};
}

ExperimentPlan calibrate(const ExperimentPlan& plan, Calibration* record, unsigned threads) {
  ExperimentPlan out = plan;
  Calibration cal;
  cal.seed = derive_seed(plan.master_seed, {kCalibrationStream});
  const bool tune_temp = plan.temp_c1_auto && plan.decoder != Decoder::mem;
  const bool tune_mem = plan.mem_c1_auto && plan.decoder != Decoder::temp;
  if (tune_temp || tune_mem) {
    TrialSetting base = plan.sweep.values.empty()
                            ? instantiate(plan)
                            : instantiate(plan, plan.sweep.values[(plan.sweep.values.size() - 1) / 2]);
    if (plan.sweep.param != SweepParam::n && !plan.n_grid.empty()) {
      base.n = plan.n_grid[(plan.n_grid.size() - 1) / 2];
    }
    const std::vector<double> grid(std::begin(kCalibrationGrid), std::end(kCalibrationGrid));
    const std::vector<double> temp_opts = tune_temp ? grid : std::vector<double>{plan.temp_schedule.c1};
    const std::vector<double> mem_opts = tune_mem ? grid : std::vector<double>{plan.mem_schedule.c1};
    for (double tc : temp_opts) {
      for (double mc : mem_opts) {
        TrialSetting s = base;
        s.temp_schedule.c1 = tc;
        s.mem_schedule.c1 = mc;
        cal.candidates.push_back({tc, mc, count_errors(s, cal.seed, plan.calibration_trials, threads)});
      }
    }
    std::size_t fewest = cal.candidates.front().errors;
    for (const auto& c : cal.candidates) fewest = std::min(fewest, c.errors);
    std::vector<const Calibration::Candidate*> tied;
    for (const auto& c : cal.candidates) {
      if (c.errors == fewest) tied.push_back(&c);
    }
    const auto* pick = tied[(tied.size() - 1) / 2];
    if (tune_temp) {
      out.temp_schedule.c1 = pick->temp_c1;
      cal.temp_c1 = pick->temp_c1;
    }
    if (tune_mem) {
      out.mem_schedule.c1 = pick->mem_c1;
      cal.mem_c1 = pick->mem_c1;
    }
  }
  out.temp_c1_auto = false;
  out.mem_c1_auto = false;
  if (record) *record = std::move(cal);
  return out;
}

SweepResult run_trials(const ExperimentPlan& plan_in, unsigned threads) {
  plan_in.validate();
  if (plan_in.sweep.values.empty()) throw std::invalid_argument("run_trials: sweep has no values");
  SweepResult result;
  const ExperimentPlan plan = calibrate(plan_in, &result.calibration, threads);
  for (std::size_t k = 0; k < plan.sweep.values.size(); ++k) {
    const auto start = std::chrono::steady_clock::now();
    const double value = plan.sweep.values[k];
    const TrialSetting setting = instantiate(plan, value);
    SweepRow row;
    row.sweep_param = to_string(plan.sweep.param);
    row.value = value;
    row.n = setting.n;
    row.trials = plan.trials;
    row.seed = derive_seed(plan.master_seed, {k});
    row.errors = count_errors(setting, row.seed, plan.trials, threads);
    row.p_hat = static_cast<double>(row.errors) / static_cast<double>(row.trials);
    row.ci = wilson_interval(row.errors, row.trials);
    row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    result.rows.push_back(std::move(row));
  }
  return result;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_sweep_csv(std::ostream& os, const SweepResult& result, bool timing) {
  os << "sweep_param,value,n,trials,errors,p_hat,ci_lo,ci_hi,seed,wall_ms\n";
  for (const auto& r : result.rows) {
    os << r.sweep_param << ',' << format_double(r.value) << ',' << r.n << ',' << r.trials << ','
       << r.errors << ',' << format_double(r.p_hat) << ',' << format_double(r.ci.lo) << ','
       << format_double(r.ci.hi) << ',' << r.seed << ','
       << (timing ? format_double(std::round(r.wall_ms * 1000.0) / 1000.0) : "0") << '\n';
  }
}

ComplexityResult estimate_sample_complexity(const ExperimentPlan& plan_in, unsigned threads) {
  plan_in.validate();
  if (plan_in.sweep.values.empty() || plan_in.sweep.param == SweepParam::n) {
    throw std::invalid_argument("estimate_sample_complexity: sweep over ell, theta_d or theta_m");
  }
  if (plan_in.n_grid.empty()) throw std::invalid_argument("estimate_sample_complexity: empty n grid");
  ComplexityResult result;
  const ExperimentPlan plan = calibrate(plan_in, &result.calibration, threads);
  const auto& grid = plan.n_grid;
  for (std::size_t v = 0; v < plan.sweep.values.size(); ++v) {
    const double value = plan.sweep.values[v];
    TrialSetting setting = instantiate(plan, value);
    std::vector<std::optional<std::size_t>> errors(grid.size());
    auto eval = [&](std::size_t g) {
      if (!errors[g]) {
        setting.n = grid[g];
        errors[g] = count_errors(setting, derive_seed(plan.master_seed, {v, g}), plan.trials, threads);
      }
      return static_cast<double>(*errors[g]) / static_cast<double>(plan.trials) < plan.target_eps;
    };
    ComplexityRow row;
    row.sweep_param = to_string(plan.sweep.param);
    row.value = value;
    row.target_eps = plan.target_eps;
    const std::size_t last = grid.size() - 1;
    if (!eval(last)) {
      row.n_star = std::nullopt;
    } else if (eval(0)) {
      row.n_star = grid[0];
    } else {
      std::size_t lo = 0, hi = last;
      while (hi - lo > 1) {
        const std::size_t mid = lo + (hi - lo) / 2;
        (eval(mid) ? hi : lo) = mid;
      }
      row.n_star = grid[hi];
    }
    std::vector<std::size_t> seen;
    for (std::size_t g = 0; g < grid.size(); ++g) {
      if (errors[g]) seen.push_back(g);
    }
    row.evaluations = seen.size();
    for (std::size_t a = 0; a < seen.size() && row.monotone; ++a) {
      for (std::size_t b = a + 1; b < seen.size(); ++b) {
        if (wilson_interval(*errors[seen[b]], plan.trials).lo >
            wilson_interval(*errors[seen[a]], plan.trials).hi) {
          row.monotone = false;
          break;
        }
      }
    }
    result.rows.push_back(std::move(row));
  }
  return result;
}

void write_complexity_csv(std::ostream& os, const ComplexityResult& result) {
  os << "sweep_param,value,n_star,target_eps,monotone,evaluations\n";
  for (const auto& r : result.rows) {
    os << r.sweep_param << ',' << format_double(r.value) << ','
       << (r.n_star ? std::to_string(*r.n_star) : std::string("none")) << ','
       << format_double(r.target_eps) << ',' << (r.monotone ? "true" : "false") << ','
       << r.evaluations << '\n';
  }
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_line: need two or more points");
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    mx += x[k];
    my += y[k];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxx += (x[k] - mx) * (x[k] - mx);
    sxy += (x[k] - mx) * (y[k] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_line: x values are all equal");
  const double slope = sxy / sxx;
  return LineFit{slope, my - slope * mx};
}

}  // namespace crowdclust
