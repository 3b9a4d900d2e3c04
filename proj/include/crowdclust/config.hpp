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

#ifndef CROWDCLUST_CONFIG_HPP_
#define CROWDCLUST_CONFIG_HPP_

#include <string>
#include <string_view>

#include "crowdclust/experiment.hpp"

namespace crowdclust {

// Reads an experiment plan from JSON text. Unknown keys are rejected.
// Throws std::invalid_argument with a readable message on bad input.
ExperimentPlan parse_plan(std::string_view json_text);
ExperimentPlan load_plan(const std::string& path);

// Metadata written next to sweep/complexity output.
std::string calibration_to_json(const Calibration& calibration, const ExperimentPlan& plan);

}  // namespace crowdclust

#endif  // CROWDCLUST_CONFIG_HPP_
