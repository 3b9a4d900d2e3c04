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

#include "crowdclust/info_estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace crowdclust {

namespace {

double clamp_mi(double v) { return (v < 0.0 && v >= -1e-12) ? 0.0 : v; }

}  // namespace

JointCounts::JointCounts(std::vector<std::size_t> shape) : shape_(std::move(shape)) {
  if (shape_.empty() || shape_.size() > 3) {
    throw std::invalid_argument("JointCounts: rank must be 1, 2 or 3");
  }
  std::size_t cells = 1;
  for (std::size_t d : shape_) {
    if (d == 0) throw std::invalid_argument("JointCounts: empty coordinate");
    cells *= d;
  }
  table_.assign(cells, 0);
}

JointCounts::JointCounts(std::vector<std::size_t> shape, std::vector<std::uint64_t> table)
    : JointCounts(std::move(shape)) {
  if (table.size() != table_.size()) throw std::invalid_argument("JointCounts: table size mismatch");
  table_ = std::move(table);
  total_ = std::accumulate(table_.begin(), table_.end(), std::uint64_t{0});
}

JointCounts JointCounts::marginal(std::span<const std::size_t> keep) const {
  if (keep.empty()) throw std::invalid_argument("JointCounts::marginal: nothing kept");
  std::vector<std::size_t> out_shape;
  for (std::size_t k = 0; k < keep.size(); ++k) {
    if (keep[k] >= rank() || (k && keep[k] <= keep[k - 1])) {
      throw std::invalid_argument("JointCounts::marginal: bad coordinate list");
    }
    out_shape.push_back(shape_[keep[k]]);
  }
  JointCounts out(out_shape);
  std::vector<std::size_t> idx(rank(), 0);
  for (std::size_t flat = 0; flat < table_.size(); ++flat) {
    std::size_t rem = flat;
    for (std::size_t d = rank(); d-- > 0;) {
      idx[d] = rem % shape_[d];
      rem /= shape_[d];
    }
    std::size_t target = 0;
    for (std::size_t k = 0; k < keep.size(); ++k) target = target * out_shape[k] + idx[keep[k]];
    out.table_[target] += table_[flat];
  }
  out.total_ = total_;
  return out;
}

JointCounts JointCounts::merge_trailing() const {
  if (rank() != 3) throw std::invalid_argument("JointCounts::merge_trailing: rank must be 3");
  return JointCounts({shape_[0], shape_[1] * shape_[2]}, table_);
}

double entropy_bits(std::span<const double> pmf) {
  double h = 0.0;
  for (double p : pmf) {
    if (p > 0.0) h -= p * std::log2(p);
  }
  return std::max(h, 0.0);
}

double mutual_information_bits(std::span<const double> joint, std::size_t rows,
                               std::size_t cols) {
  if (joint.size() != rows * cols) throw std::invalid_argument("mutual_information_bits: shape");
  std::vector<double> pr(rows, 0.0), pc(cols, 0.0);
  for (std::size_t a = 0; a < rows; ++a) {
    for (std::size_t b = 0; b < cols; ++b) {
      pr[a] += joint[a * cols + b];
      pc[b] += joint[a * cols + b];
    }
  }
  double mi = 0.0;
  for (std::size_t a = 0; a < rows; ++a) {
    for (std::size_t b = 0; b < cols; ++b) {
      const double p = joint[a * cols + b];
      if (p > 0.0) mi += p * std::log2(p / (pr[a] * pc[b]));
    }
  }
  return std::max(mi, 0.0);
}

double plugin_entropy(std::span<const std::uint64_t> counts) {
  const std::uint64_t n = std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
  if (n == 0) throw std::invalid_argument("plugin_entropy: no samples");
  const double nn = static_cast<double>(n);
  // Summing in sorted order makes the result independent of cell layout,
  // so I(X;Y) and I(Y;X) agree bit for bit.
  std::vector<std::uint64_t> sorted;
  sorted.reserve(counts.size());
  for (std::uint64_t c : counts) {
    if (c > 0) sorted.push_back(c);
  }
  std::sort(sorted.begin(), sorted.end());
  double s = 0.0;
  for (std::uint64_t c : sorted) {
    const double cc = static_cast<double>(c);
    s += cc * std::log2(cc);
  }
  return std::max(std::log2(nn) - s / nn, 0.0);
}

double plugin_entropy(const JointCounts& counts) { return plugin_entropy(counts.table()); }

double plugin_mi(const JointCounts& counts) {
  if (counts.rank() != 2) throw std::invalid_argument("plugin_mi: rank must be 2");
  const std::size_t x[] = {0}, y[] = {1};
  const double hx = plugin_entropy(counts.marginal(x));
  const double hy = plugin_entropy(counts.marginal(y));
  return clamp_mi(hx + hy - plugin_entropy(counts));
}

double plugin_triple_mi(const JointCounts& counts) {
  if (counts.rank() != 3) throw std::invalid_argument("plugin_triple_mi: rank must be 3");
  return plugin_mi(counts.merge_trailing());
}

double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("binary_entropy: p outside [0,1]");
  if (p == 0.0 || p == 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double inverse_binary_entropy(double h) {
  if (!(h >= 0.0 && h <= 1.0)) throw std::invalid_argument("inverse_binary_entropy: h outside [0,1]");
  double lo = 0.0, hi = 0.5;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    (binary_entropy(mid) < h ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double entropy_bias_bound(std::size_t alphabet_size, std::size_t n) {
  if (n == 0) throw std::invalid_argument("entropy_bias_bound: n must be >= 1");
  if (alphabet_size == 0) throw std::invalid_argument("entropy_bias_bound: empty alphabet");
  return std::log2(1.0 + static_cast<double>(alphabet_size - 1) / static_cast<double>(n));
}

}  // namespace crowdclust
