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

#include "crowdclust/partition.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "crowdclust/rng.hpp"

namespace crowdclust {

LabelAlphabet::LabelAlphabet(int num_classes) : tau(num_classes) {
  if (tau < 1 || tau > 254) {
    throw std::invalid_argument("LabelAlphabet: tau must be in [1, 254]");
  }
}

ObjectSequence::ObjectSequence(int tau, std::vector<Label> labels,
                               std::optional<std::vector<double>> prior)
    : tau_(LabelAlphabet(tau).tau), labels_(std::move(labels)), prior_(std::move(prior)) {
  for (Label t : labels_) {
    if (t < 1 || t > tau_) {
      throw std::invalid_argument("ObjectSequence: label outside 1..tau");
    }
  }
  if (prior_) {
    if (prior_->size() != static_cast<std::size_t>(tau_)) {
      throw std::invalid_argument("ObjectSequence: prior must have tau entries");
    }
    double total = 0.0;
    for (double p : *prior_) {
      if (!(p >= 0.0)) throw std::invalid_argument("ObjectSequence: negative prior mass");
      total += p;
    }
    if (std::abs(total - 1.0) > 1e-12) {
      throw std::invalid_argument("ObjectSequence: prior does not sum to 1");
    }
  }
}

ObjectSequence ObjectSequence::draw(int tau, std::size_t ell,
                                    std::span<const double> prior, Rng& rng) {
  std::vector<double> p(prior.begin(), prior.end());
  if (p.empty()) p.assign(static_cast<std::size_t>(tau), 1.0 / tau);
  std::vector<Label> labels(ell);
  for (auto& t : labels) t = static_cast<Label>(rng.categorical(p)) + 1;
  return ObjectSequence(tau, std::move(labels), std::move(p));
}

ObjectSequence ObjectSequence::permuted(std::span<const std::size_t> order) const {
  if (order.size() != labels_.size()) {
    throw std::invalid_argument("ObjectSequence::permuted: size mismatch");
  }
  std::vector<Label> out(order.size());
  for (std::size_t p = 0; p < order.size(); ++p) out[p] = labels_.at(order[p]);
  return ObjectSequence(tau_, std::move(out), prior_);
}

Partition::Partition(std::size_t ground_size, std::vector<Cluster> clusters)
    : ground_size_(ground_size), clusters_(std::move(clusters)) {
  std::vector<char> seen(ground_size_, 0);
  std::size_t covered = 0;
  for (auto& c : clusters_) {
    if (c.empty()) throw std::invalid_argument("Partition: empty cluster");
    std::sort(c.begin(), c.end());
    for (std::size_t x : c) {
      if (x >= ground_size_) throw std::invalid_argument("Partition: index out of range");
      if (seen[x]) throw std::invalid_argument("Partition: clusters overlap");
      seen[x] = 1;
      ++covered;
    }
  }
  if (covered != ground_size_) throw std::invalid_argument("Partition: clusters do not cover");
  std::sort(clusters_.begin(), clusters_.end(),
            [](const Cluster& a, const Cluster& b) { return a.front() < b.front(); });
}

Partition Partition::from_assignment(std::span<const std::size_t> block_ids) {
  std::map<std::size_t, Cluster> groups;
  for (std::size_t i = 0; i < block_ids.size(); ++i) groups[block_ids[i]].push_back(i);
  std::vector<Cluster> clusters;
  clusters.reserve(groups.size());
  for (auto& [id, c] : groups) clusters.push_back(std::move(c));
  return Partition(block_ids.size(), std::move(clusters));
}

Partition Partition::from_one_based(std::size_t ground_size,
                                    const std::vector<std::vector<std::size_t>>& clusters) {
  std::vector<Cluster> zero_based;
  zero_based.reserve(clusters.size());
  for (const auto& c : clusters) {
    Cluster z;
    for (std::size_t x : c) {
      if (x == 0) throw std::invalid_argument("Partition::from_one_based: index 0");
      z.push_back(x - 1);
    }
    zero_based.push_back(std::move(z));
  }
  return Partition(ground_size, std::move(zero_based));
}

Partition Partition::singletons(std::size_t ground_size) {
  std::vector<Cluster> c(ground_size);
  for (std::size_t i = 0; i < ground_size; ++i) c[i] = {i};
  return Partition(ground_size, std::move(c));
}

Partition Partition::whole(std::size_t ground_size) {
  if (ground_size == 0) return Partition(0, {});
  Cluster all(ground_size);
  std::iota(all.begin(), all.end(), std::size_t{0});
  return Partition(ground_size, {std::move(all)});
}

std::vector<std::size_t> Partition::assignment() const {
  std::vector<std::size_t> out(ground_size_);
  for (std::size_t k = 0; k < clusters_.size(); ++k) {
    for (std::size_t x : clusters_[k]) out[x] = k;
  }
  return out;
}

std::string Partition::to_json() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t k = 0; k < clusters_.size(); ++k) {
    if (k) os << ',';
    os << '[';
    for (std::size_t m = 0; m < clusters_[k].size(); ++m) {
      if (m) os << ',';
      os << clusters_[k][m] + 1;
    }
    os << ']';
  }
  os << ']';
  return os.str();
}

Partition correct_partition(const ObjectSequence& seq) {
  if (seq.size() == 0) throw std::invalid_argument("correct_partition: empty sequence");
  std::vector<std::size_t> ids(seq.labels().begin(), seq.labels().end());
  return Partition::from_assignment(ids);
}

namespace {

void require_same_ground(const Partition& a, const Partition& b, const char* who) {
  if (a.ground_size() != b.ground_size()) {
    throw std::invalid_argument(std::string(who) + ": ground-set mismatch");
  }
}

}  // namespace

bool refines(const Partition& finer, const Partition& coarser) {
  require_same_ground(finer, coarser, "refines");
  const auto block = coarser.assignment();
  for (const auto& c : finer.clusters()) {
    for (std::size_t x : c) {
      if (block[x] != block[c.front()]) return false;
    }
  }
  return true;
}

Partition meet(std::span<const Partition> parts) {
  if (parts.empty()) throw std::invalid_argument("meet: empty list");
  const std::size_t n = parts.front().ground_size();
  std::vector<std::vector<std::size_t>> keys(n);
  for (const auto& p : parts) {
    require_same_ground(parts.front(), p, "meet");
    const auto block = p.assignment();
    for (std::size_t i = 0; i < n; ++i) keys[i].push_back(block[i]);
  }
  std::map<std::vector<std::size_t>, Partition::Cluster> groups;
  for (std::size_t i = 0; i < n; ++i) groups[keys[i]].push_back(i);
  std::vector<Partition::Cluster> clusters;
  clusters.reserve(groups.size());
  for (auto& [key, c] : groups) clusters.push_back(std::move(c));
  return Partition(n, std::move(clusters));
}

bool clustering_error(const Partition& estimate, const Partition& truth) {
  require_same_ground(estimate, truth, "clustering_error");
  return !(estimate == truth);
}

}  // namespace crowdclust
