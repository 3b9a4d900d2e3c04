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

#include <filesystem>
#include <stdexcept>
#include <string>

#include <gtest/gtest.h>

namespace crowdclust {
namespace {

constexpr const char* kMinimal = R"({
  "tau": 2, "ell": 10,
  "model": {"type": "temporary", "theta_d": 0.4},
  "sweep": {"param": "n", "values": [50, 100]}
})";

std::string with(const std::string& extra) {
  std::string s = kMinimal;
  s.insert(s.rfind('}'), ", " + extra);
  return s;
}

TEST(Config, ShippedConfigsParse) {
  int seen = 0;
  for (const auto& entry : std::filesystem::directory_iterator(CROWDCLUST_CONFIG_DIR)) {
    if (entry.path().extension() != ".json") continue;
    ++seen;
    EXPECT_NO_THROW(load_plan(entry.path().string())) << entry.path();
  }
  EXPECT_GE(seen, 5);
}

TEST(Config, Defaults) {
  const ExperimentPlan p = parse_plan(kMinimal);
  EXPECT_EQ(p.decoder, Decoder::temp);
  EXPECT_EQ(p.divergence, DivergenceKind::total_variation);
  EXPECT_EQ(p.temp_schedule.branch, ThresholdSchedule::Branch::tv_alpha);
  EXPECT_FALSE(p.temp_c1_auto);
  ASSERT_EQ(p.sweep.values.size(), 2u);
  const auto& t = std::get<TemporaryWorkerModel>(p.model);
  EXPECT_NEAR(tv_distance(t.channels[0], t.channels[1]), 0.4, 1e-12);
}

TEST(Config, UnknownKeysRejected) {
  EXPECT_THROW(parse_plan(with(R"("trails": 10)")), std::invalid_argument);
  EXPECT_THROW(parse_plan(R"({"tau": 2, "ell": 10, "model": {"type": "temporary", "theta_d": 0.4, "noise": 1}})"),
               std::invalid_argument);
  EXPECT_THROW(parse_plan(with(R"("temp_schedule": {"c1": 1, "alpha": 0.2})")), std::invalid_argument);
}

TEST(Config, MalformedInput) {
  EXPECT_THROW(parse_plan("{"), std::invalid_argument);
  EXPECT_THROW(parse_plan(with(R"("decoder": "fast")")), std::invalid_argument);
  EXPECT_THROW(parse_plan(with(R"("divergence": "js")")), std::invalid_argument);
  EXPECT_THROW(parse_plan(with(R"("temp_schedule": {"c1": "guess"})")), std::invalid_argument);
  EXPECT_THROW(load_plan("/nonexistent/plan.json"), std::invalid_argument);
}

TEST(Config, AutoConstant) {
  const ExperimentPlan p = parse_plan(with(R"("temp_schedule": {"c1": "auto", "exponent": 0.2})"));
  EXPECT_TRUE(p.temp_c1_auto);
  EXPECT_DOUBLE_EQ(p.temp_schedule.exponent, 0.2);
}

TEST(Config, KlUsesBetaBranch) {
  const ExperimentPlan p = parse_plan(with(R"("divergence": "kl", "kl_lipschitz": 6)"));
  EXPECT_EQ(p.temp_schedule.branch, ThresholdSchedule::Branch::f_beta);
  EXPECT_DOUBLE_EQ(p.temp_schedule.exponent, 0.5);
  EXPECT_EQ(p.divergence_spec().kind(), DivergenceKind::kl);
}

TEST(Config, PermutationsAreOneBased) {
  const ExperimentPlan p = parse_plan(R"({
    "decoder": "mem", "tau": 2, "ell": 5,
    "model": {"type": "memory", "variant": "same_class_copy", "copy_prob": 0.5, "theta_d": 0.2},
    "permutations": [[1, 2, 3, 4, 5], [5, 4, 3, 2, 1]],
    "sweep": {"param": "n", "values": [100]}
  })");
  ASSERT_TRUE(p.permutations.has_value());
  EXPECT_EQ((*p.permutations)[1], (std::vector<std::size_t>{4, 3, 2, 1, 0}));
  EXPECT_THROW(parse_plan(R"({
    "decoder": "mem", "tau": 2, "ell": 5,
    "model": {"type": "memory", "variant": "same_class_copy", "copy_prob": 0.5},
    "permutations": [[0, 1, 2, 3, 4]]
  })"),
               std::invalid_argument);
}

TEST(Config, MemoryVariants) {
  const ExperimentPlan a = parse_plan(R"({
    "decoder": "mem", "tau": 2, "ell": 8,
    "model": {"type": "memory", "variant": "inertial", "theta_m": 0.1}
  })");
  const auto& m = std::get<MemoryWorkerModel>(a.model);
  EXPECT_TRUE(std::holds_alternative<InertialCopy>(m.variant));
  const ExperimentPlan b = parse_plan(R"({
    "decoder": "unified", "tau": 2, "ell": 8,
    "model": {"type": "memory", "variant": "unified", "p": 0.8, "theta_m": 0.1}
  })");
  const auto& u = std::get<UnifiedConverse>(std::get<MemoryWorkerModel>(b.model).variant);
  EXPECT_DOUBLE_EQ(u.p, 0.8);
  EXPECT_NEAR(u.neighbor_information(), 0.2, 1e-9);
  EXPECT_THROW(parse_plan(R"({
    "decoder": "mem", "tau": 2, "ell": 8,
    "model": {"type": "memory", "variant": "inertial", "theta_m": 0.1, "epsilon": 0.2}
  })"),
               std::invalid_argument);
}

TEST(Config, CalibrationJson) {
  ExperimentPlan p = parse_plan(kMinimal);
  Calibration c;
  c.seed = 9;
  c.temp_c1 = 0.3;
  c.candidates.push_back({0.3, p.mem_schedule.c1, 2});
  const std::string s = calibration_to_json(c, p);
  EXPECT_NE(s.find("\"temp_c1\": 0.3"), std::string::npos);
  EXPECT_NE(s.find("\"temp_c1_calibrated\": true"), std::string::npos);
  EXPECT_NE(s.find("\"calibration_seed\": 9"), std::string::npos);
}

}  // namespace
}  // namespace crowdclust
