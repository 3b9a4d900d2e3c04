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

#include "crowdclust/config.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace crowdclust {

namespace {

using nlohmann::json;

void allow_only(const json& j, const std::set<std::string>& keys, const std::string& where) {
  if (!j.is_object()) throw std::invalid_argument(where + ": expected an object");
  for (const auto& item : j.items()) {
    if (!keys.count(item.key())) throw std::invalid_argument(where + ": unknown key '" + item.key() + "'");
  }
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

std::vector<Pmf> read_channels(const json& j, int tau) {
  std::vector<Pmf> out;
  if (!j.is_array() || j.size() != static_cast<std::size_t>(tau)) {
    throw std::invalid_argument("model.channels: need one pmf per class");
  }
  for (const auto& row : j) {
    auto mass = row.get<std::vector<double>>();
    // Rows listing only the class symbols get zero mass on the null response.
    if (mass.size() == static_cast<std::size_t>(tau)) mass.insert(mass.begin(), 0.0);
    out.emplace_back(std::move(mass));
  }
  return out;
}

std::vector<Pmf> channels_or_default(const json& m, int tau) {
  if (m.contains("channels") && m.contains("theta_d")) {
    throw std::invalid_argument("model: give channels or theta_d, not both");
  }
  if (m.contains("channels")) return read_channels(m.at("channels"), tau);
  if (m.contains("theta_d")) return symmetric_channels(tau, m.at("theta_d").get<double>());
  return symmetric_channels(tau, 0.0);
}

WorkerModel read_model(const json& m, int tau) {
  const auto type = m.at("type").get<std::string>();
  if (type == "temporary") {
    allow_only(m, {"type", "channels", "theta_d", "heterogeneity"}, "model");
    TemporaryWorkerModel t;
    t.channels = channels_or_default(m, tau);
    t.heterogeneity = get_or(m, "heterogeneity", 0.0);
    return t;
  }
  if (type != "memory") throw std::invalid_argument("model.type must be temporary or memory");
  allow_only(m,
             {"type", "variant", "channels", "theta_d", "copy_prob", "anchor_prob", "memory_depth",
              "epsilon", "theta_m", "p", "a", "b"},
             "model");
  MemoryWorkerModel mm;
  mm.tau = tau;
  mm.memory_depth = get_or(m, "memory_depth", 1);
  const auto variant = m.at("variant").get<std::string>();
  if (variant == "same_class_copy") {
    mm.base_channels = channels_or_default(m, tau);
    mm.variant = SameClassCopy{m.at("copy_prob").get<double>()};
  } else if (variant == "full_markov") {
    mm.base_channels = channels_or_default(m, tau);
    mm.variant = FullMarkov{m.at("copy_prob").get<double>(), get_or(m, "anchor_prob", 0.0)};
  } else if (variant == "inertial") {
    if (m.contains("epsilon") == m.contains("theta_m")) {
      throw std::invalid_argument("model: inertial needs exactly one of epsilon, theta_m");
    }
    mm.variant = m.contains("epsilon") ? InertialCopy{m.at("epsilon").get<double>()}
                                       : InertialCopy::for_memory_quality(m.at("theta_m").get<double>());
  } else if (variant == "unified") {
    const double p = m.at("p").get<double>();
    if (m.contains("theta_m")) {
      mm.variant = UnifiedConverse::solve(p, m.at("theta_m").get<double>());
    } else {
      mm.variant = UnifiedConverse{p, m.at("a").get<double>(), m.at("b").get<double>()};
    }
  } else {
    throw std::invalid_argument("model.variant: unknown variant '" + variant + "'");
  }
  return mm;
}

void read_schedule(const json& j, ThresholdSchedule& s, bool& automatic, const char* where) {
  allow_only(j, {"c1", "exponent"}, where);
  if (j.contains("c1")) {
    if (j.at("c1").is_string()) {
      if (j.at("c1").get<std::string>() != "auto") {
        throw std::invalid_argument(std::string(where) + ".c1: number or \"auto\"");
      }
      automatic = true;
    } else {
      s.c1 = j.at("c1").get<double>();
    }
  }
  s.exponent = get_or(j, "exponent", s.exponent);
}

ExperimentPlan read_plan(const json& j) {
  allow_only(j,
             {"decoder", "tau", "ell", "prior", "model", "divergence", "kl_lipschitz",
              "temp_schedule", "mem_schedule", "n", "epsilon", "permutations", "sweep", "trials",
              "seed", "n_grid", "target_eps", "calibration_trials", "fresh_refinement_samples"},
             "config");
  ExperimentPlan p;
  const auto decoder = get_or<std::string>(j, "decoder", "temp");
  if (decoder == "temp") {
    p.decoder = Decoder::temp;
  } else if (decoder == "mem") {
    p.decoder = Decoder::mem;
  } else if (decoder == "unified") {
    p.decoder = Decoder::unified;
  } else {
    throw std::invalid_argument("decoder must be temp, mem or unified");
  }
  p.tau = j.at("tau").get<int>();
  LabelAlphabet check(p.tau);
  p.ell = j.at("ell").get<std::size_t>();
  p.prior = get_or(j, "prior", std::vector<double>{});
  p.model = read_model(j.at("model"), p.tau);

  const auto divergence = get_or<std::string>(j, "divergence", "tv");
  if (divergence == "tv") {
    p.divergence = DivergenceKind::total_variation;
    p.temp_schedule.branch = ThresholdSchedule::Branch::tv_alpha;
  } else if (divergence == "kl") {
    p.divergence = DivergenceKind::kl;
    p.temp_schedule.branch = ThresholdSchedule::Branch::f_beta;
    p.temp_schedule.exponent = 0.5;
  } else {
    throw std::invalid_argument("divergence must be tv or kl");
  }
  p.kl_lipschitz = get_or(j, "kl_lipschitz", p.kl_lipschitz);
  if (j.contains("temp_schedule")) read_schedule(j.at("temp_schedule"), p.temp_schedule, p.temp_c1_auto, "temp_schedule");
  if (j.contains("mem_schedule")) read_schedule(j.at("mem_schedule"), p.mem_schedule, p.mem_c1_auto, "mem_schedule");

  p.n = get_or<std::size_t>(j, "n", p.n);
  p.epsilon = get_or(j, "epsilon", p.epsilon);
  if (j.contains("permutations")) {
    auto perms = j.at("permutations").get<std::vector<std::vector<std::size_t>>>();
    for (auto& perm : perms) {
      for (auto& x : perm) {
        if (x < 1) throw std::invalid_argument("permutations: objects are numbered from 1");
        --x;
      }
    }
    p.permutations = std::move(perms);
  }
  p.fresh_refinement_samples = get_or(j, "fresh_refinement_samples", false);
  if (j.contains("sweep")) {
    const auto& s = j.at("sweep");
    allow_only(s, {"param", "values"}, "sweep");
    const auto param = s.at("param").get<std::string>();
    if (param == "n") {
      p.sweep.param = SweepParam::n;
    } else if (param == "ell") {
      p.sweep.param = SweepParam::ell;
    } else if (param == "theta_d") {
      p.sweep.param = SweepParam::theta_d;
    } else if (param == "theta_m") {
      p.sweep.param = SweepParam::theta_m;
    } else {
      throw std::invalid_argument("sweep.param must be n, ell, theta_d or theta_m");
    }
    p.sweep.values = s.at("values").get<std::vector<double>>();
    if (p.sweep.values.empty()) throw std::invalid_argument("sweep.values is empty");
  }
  p.trials = get_or<std::size_t>(j, "trials", p.trials);
  p.master_seed = get_or<std::uint64_t>(j, "seed", p.master_seed);
  p.n_grid = get_or(j, "n_grid", std::vector<std::size_t>{});
  p.target_eps = get_or(j, "target_eps", p.target_eps);
  p.calibration_trials = get_or<std::size_t>(j, "calibration_trials", p.calibration_trials);
  if (p.calibration_trials < 1) throw std::invalid_argument("calibration_trials must be >= 1");
  p.validate();
  return p;
}

}  // namespace

ExperimentPlan parse_plan(std::string_view json_text) {
  try {
    return read_plan(json::parse(json_text));
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
}

ExperimentPlan load_plan(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_plan(text.str());
}

std::string calibration_to_json(const Calibration& calibration, const ExperimentPlan& plan) {
  json j;
  j["master_seed"] = plan.master_seed;
  j["calibration_seed"] = calibration.seed;
  j["temp_c1"] = calibration.temp_c1 ? json(*calibration.temp_c1) : json(plan.temp_schedule.c1);
  j["mem_c1"] = calibration.mem_c1 ? json(*calibration.mem_c1) : json(plan.mem_schedule.c1);
  j["temp_c1_calibrated"] = calibration.temp_c1.has_value();
  j["mem_c1_calibrated"] = calibration.mem_c1.has_value();
  json cands = json::array();
  for (const auto& c : calibration.candidates) {
    cands.push_back({{"temp_c1", c.temp_c1}, {"mem_c1", c.mem_c1}, {"errors", c.errors}});
  }
  j["candidates"] = cands;
  j["calibration_trials"] = plan.calibration_trials;
  return j.dump(2) + "\n";
}

}  // namespace crowdclust
