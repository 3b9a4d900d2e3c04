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

#ifndef CROWDCLUST_SELFTEST_HPP_
#define CROWDCLUST_SELFTEST_HPP_

#include <string>
#include <vector>

namespace crowdclust {

struct SelftestResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

// Quick invariant checks (a few seconds) over every module.
std::vector<SelftestResult> run_selftest();

}  // namespace crowdclust

#endif  // CROWDCLUST_SELFTEST_HPP_
