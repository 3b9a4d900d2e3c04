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

#ifndef CROWDCLUST_MI_TABLE_HPP_
#define CROWDCLUST_MI_TABLE_HPP_

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

namespace crowdclust {

// Lower-triangular table of I(Y_i; Y_{i-1}, Y_j) for j < i (0-based).
// Entries start out missing (NaN).
class MiTable {
 public:
  MiTable() = default;
  explicit MiTable(std::size_t ell)
      : ell_(ell), values_(ell * (ell > 0 ? ell - 1 : 0) / 2,
                           std::numeric_limits<double>::quiet_NaN()) {}

  std::size_t size() const { return ell_; }

  double at(std::size_t i, std::size_t j) const { return values_.at(index(i, j)); }
  void set(std::size_t i, std::size_t j, double v) { values_.at(index(i, j)) = v; }
  bool has(std::size_t i, std::size_t j) const { return !std::isnan(at(i, j)); }

  bool complete() const {
    for (double v : values_) {
      if (std::isnan(v)) return false;
    }
    return true;
  }

 private:
  std::size_t index(std::size_t i, std::size_t j) const {
    if (i >= ell_ || j >= i) throw std::out_of_range("MiTable: need j < i < ell");
    return i * (i - 1) / 2 + j;
  }

  std::size_t ell_ = 0;
  std::vector<double> values_;
};

}  // namespace crowdclust

#endif  // CROWDCLUST_MI_TABLE_HPP_
