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

#ifndef CROWDCLUST_INFO_ESTIMATORS_HPP_
#define CROWDCLUST_INFO_ESTIMATORS_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace crowdclust {

// Contingency table over one, two or three discrete coordinates, stored
// row-major (last coordinate fastest).
class JointCounts {
 public:
  explicit JointCounts(std::vector<std::size_t> shape);
  JointCounts(std::vector<std::size_t> shape, std::vector<std::uint64_t> table);

  void add(std::size_t a) { add_at(a); }
  void add(std::size_t a, std::size_t b) { add_at(a * shape_[1] + b); }
  void add(std::size_t a, std::size_t b, std::size_t c) {
    add_at((a * shape_[1] + b) * shape_[2] + c);
  }

  const std::vector<std::size_t>& shape() const { return shape_; }
  std::size_t rank() const { return shape_.size(); }
  std::span<const std::uint64_t> table() const { return table_; }
  std::uint64_t total() const { return total_; }

  // Sums out every coordinate not listed in `keep` (listed in increasing order).
  JointCounts marginal(std::span<const std::size_t> keep) const;
  // Rank-3 table (a, b, c) viewed as rank-2 (a, b*|c| + c).
  JointCounts merge_trailing() const;

 private:
  void add_at(std::size_t flat) {
    ++table_.at(flat);
    ++total_;
  }

  std::vector<std::size_t> shape_;
  std::vector<std::uint64_t> table_;
  std::uint64_t total_ = 0;
};

// Shannon entropy in bits of a probability vector; 0 log 0 = 0.
double entropy_bits(std::span<const double> pmf);

// I(X;Y) in bits for a joint pmf given as a rows x cols row-major matrix.
double mutual_information_bits(std::span<const double> joint, std::size_t rows,
                               std::size_t cols);

// Plug-in (maximum-likelihood) entropy of the full joint in bits. Requires n >= 1.
double plugin_entropy(const JointCounts& counts);
double plugin_entropy(std::span<const std::uint64_t> counts);

// Plug-in I(X;Y) = H(X) + H(Y) - H(X,Y) for a rank-2 table. Rounding
// residue down to -1e-12 is clamped to zero.
double plugin_mi(const JointCounts& counts);

// Plug-in I(X; (Y,Z)) for a rank-3 table, computed by flattening (Y,Z) into
// one product-alphabet coordinate.
double plugin_triple_mi(const JointCounts& counts);

double binary_entropy(double p);

// Inverse of the binary entropy restricted to [0, 1/2].
double inverse_binary_entropy(double h);

// log2(1 + (|X|-1)/n): magnitude bound on the (negative) bias of the plug-in
// entropy estimate from n samples.
double entropy_bias_bound(std::size_t alphabet_size, std::size_t n);

}  // namespace crowdclust

#endif  // CROWDCLUST_INFO_ESTIMATORS_HPP_
