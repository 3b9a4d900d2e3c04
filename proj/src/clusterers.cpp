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

#include "crowdclust/clusterers.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "crowdclust/info_estimators.hpp"
#include "crowdclust/rng.hpp"

namespace crowdclust {

void ThresholdSchedule::validate() const {
  if (!(c1 > 0.0) || !std::isfinite(c1)) throw std::invalid_argument("ThresholdSchedule: c1 must be positive");
  const double hi = branch == Branch::f_beta ? 1.0 : 0.5;
  if (!(exponent > 0.0 && exponent < hi)) {
    throw std::invalid_argument("ThresholdSchedule: exponent outside its open interval");
  }
}

double ThresholdSchedule::gamma(std::size_t n) const {
  validate();
  if (n == 0) throw std::invalid_argument("ThresholdSchedule: n must be positive");
  return c1 * std::pow(static_cast<double>(n), -exponent);
}

namespace {

// Fixed-width bitset over the vertices of one graph.
class VertexSet {
 public:
  explicit VertexSet(std::size_t n) : words_((n + 63) / 64, 0) {}

  void insert(std::size_t v) { words_[v / 64] |= std::uint64_t{1} << (v % 64); }
  void erase(std::size_t v) { words_[v / 64] &= ~(std::uint64_t{1} << (v % 64)); }
  bool contains(std::size_t v) const { return (words_[v / 64] >> (v % 64)) & 1u; }
  bool empty() const {
    return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
  }
  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  // Smallest member; the set must be nonempty.
  std::size_t first() const {
    for (std::size_t k = 0;; ++k) {
      if (words_[k]) return k * 64 + static_cast<std::size_t>(std::countr_zero(words_[k]));
    }
  }
  VertexSet operator&(const VertexSet& o) const {
    VertexSet r = *this;
    for (std::size_t k = 0; k < words_.size(); ++k) r.words_[k] &= o.words_[k];
    return r;
  }
  VertexSet minus(const VertexSet& o) const {
    VertexSet r = *this;
    for (std::size_t k = 0; k < words_.size(); ++k) r.words_[k] &= ~o.words_[k];
    return r;
  }

 private:
  std::vector<std::uint64_t> words_;
};

class MaxCliqueSearch {
 public:
  explicit MaxCliqueSearch(const std::vector<VertexSet>& adj) : adj_(adj) {}

  // Maximum clique inside `candidates`. Branching includes the smallest
  // candidate first and only strictly larger cliques replace the incumbent,
  // so among maximum cliques the lexicographically smallest one is returned.
  std::vector<std::size_t> run(const VertexSet& candidates) {
    best_.clear();
    current_.clear();
    expand(candidates);
    return best_;
  }

 private:
  // Greedy colouring of the candidates; the number of colours bounds the
  // size of any clique inside them.
  std::size_t colour_bound(VertexSet rest) const {
    std::size_t colours = 0;
    while (!rest.empty()) {
      ++colours;
      VertexSet avail = rest;
      while (!avail.empty()) {
        const std::size_t v = avail.first();
        rest.erase(v);
        avail.erase(v);
        avail = avail.minus(adj_[v]);
      }
    }
    return colours;
  }

  void expand(VertexSet candidates) {
    if (candidates.empty()) {
      if (current_.size() > best_.size()) best_ = current_;
      return;
    }
    if (current_.size() + candidates.count() <= best_.size()) return;
    if (current_.size() + colour_bound(candidates) <= best_.size()) return;
    const std::size_t v = candidates.first();
    current_.push_back(v);
    expand(candidates & adj_[v]);
    current_.pop_back();
    candidates.erase(v);
    expand(candidates);
  }

  const std::vector<VertexSet>& adj_;
  std::vector<std::size_t> best_;
  std::vector<std::size_t> current_;
};

}  // namespace

DivergenceMatrix empirical_divergences(const ResponseMatrix& responses,
                                       const FDivergenceSpec& spec) {
  const std::size_t ell = responses.objects();
  std::vector<Pmf> q;
  q.reserve(ell);
  for (std::size_t i = 0; i < ell; ++i) {
    q.push_back(empirical_pmf(responses.row(i), responses.alphabet_size()));
  }
  DivergenceMatrix d(ell, std::vector<double>(ell, 0.0));
  const bool tv = spec.kind() == DivergenceKind::total_variation;
  for (std::size_t i = 0; i < ell; ++i) {
    for (std::size_t j = i + 1; j < ell; ++j) {
      const double v = tv ? tv_distance(q[i], q[j])
                          : std::max(f_divergence(spec, q[i], q[j]), f_divergence(spec, q[j], q[i]));
      d[i][j] = d[j][i] = v;
    }
  }
  return d;
}

Partition cluster_threshold_graph(const DivergenceMatrix& d, double gamma) {
  const std::size_t ell = d.size();
  for (const auto& row : d) {
    if (row.size() != ell) throw std::invalid_argument("cluster_threshold_graph: matrix not square");
  }
  std::vector<VertexSet> adj(ell, VertexSet(ell));
  for (std::size_t i = 0; i < ell; ++i) {
    for (std::size_t j = i + 1; j < ell; ++j) {
      if (d[i][j] <= gamma && d[j][i] <= gamma) {
        adj[i].insert(j);
        adj[j].insert(i);
      }
    }
  }

  // Connected components by union-find.
  std::vector<std::size_t> parent(ell);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < ell; ++i) {
    for (std::size_t j = i + 1; j < ell; ++j) {
      if (adj[i].contains(j)) parent[find(j)] = find(i);
    }
  }
  std::vector<std::vector<std::size_t>> components(ell);
  for (std::size_t i = 0; i < ell; ++i) components[find(i)].push_back(i);

  std::vector<Partition::Cluster> clusters;
  MaxCliqueSearch search(adj);
  for (auto& comp : components) {
    if (comp.empty()) continue;
    bool clique = true;
    for (std::size_t a = 0; a < comp.size() && clique; ++a) {
      clique = adj[comp[a]].count() + 1 == comp.size();
    }
    if (clique) {
      clusters.push_back(comp);
      continue;
    }
    VertexSet left(ell);
    for (std::size_t v : comp) left.insert(v);
    while (!left.empty()) {
      auto best = search.run(left);
      for (std::size_t v : best) left.erase(v);
      clusters.push_back(std::move(best));
    }
  }
  return Partition(ell, std::move(clusters));
}

Partition cluster_temp(const ResponseMatrix& responses, const FDivergenceSpec& spec,
                       const ThresholdSchedule& schedule) {
  const bool tv = spec.kind() == DivergenceKind::total_variation;
  if (tv != (schedule.branch == ThresholdSchedule::Branch::tv_alpha) ||
      schedule.branch == ThresholdSchedule::Branch::info_alpha) {
    throw std::invalid_argument("cluster_temp: schedule branch does not match the divergence");
  }
  if (responses.workers() == 0) throw std::invalid_argument("cluster_temp: no responses");
  if (responses.objects() == 0) return Partition(0, {});
  return cluster_threshold_graph(empirical_divergences(responses, spec),
                                 schedule.gamma(responses.workers()));
}

Partition cluster_info(const MiTable& mi, double gamma) {
  const std::size_t ell = mi.size();
  if (!mi.complete()) throw std::invalid_argument("cluster_info: missing table entries");
  std::vector<char> flag(ell, 0);
  std::vector<std::size_t> cluster(ell, 0);
  std::size_t opened = 0;
  for (std::size_t i = ell; i-- > 0;) {
    if (!flag[i]) {
      flag[i] = 1;
      cluster[i] = opened++;
    }
    if (i == 0) continue;
    double top = mi.at(i, 0);
    for (std::size_t k = 1; k < i; ++k) top = std::max(top, mi.at(i, k));
    std::size_t eta = 0;
    for (std::size_t j = i; j-- > 0;) {
      if (mi.at(i, j) >= top - gamma) {
        eta = j;
        break;
      }
    }
    if (!flag[eta]) {
      cluster[eta] = cluster[i];
      flag[eta] = 1;
    }
  }
  return Partition::from_assignment(cluster);
}

Partition cluster_info(const MiTable& mi, const ThresholdSchedule& schedule, std::size_t n) {
  if (schedule.branch != ThresholdSchedule::Branch::info_alpha) {
    throw std::invalid_argument("cluster_info: schedule must use the info_alpha branch");
  }
  return cluster_info(mi, schedule.gamma(n));
}

MiTable estimate_mi_table(const ResponseMatrix& responses) {
  const std::size_t ell = responses.objects();
  const std::size_t m = responses.alphabet_size();
  MiTable table(ell);
  for (std::size_t i = 1; i < ell; ++i) {
    const auto yi = responses.row(i);
    const auto yp = responses.row(i - 1);
    for (std::size_t j = 0; j < i; ++j) {
      const auto yj = responses.row(j);
      JointCounts counts({m, m, m});
      for (std::size_t w = 0; w < responses.workers(); ++w) counts.add(yi[w], yp[w], yj[w]);
      table.set(i, j, plugin_triple_mi(counts));
    }
  }
  return table;
}

std::size_t permutation_rounds(std::size_t ell, int tau, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("permutation_rounds: epsilon outside (0,1)");
  if (tau < 1) throw std::invalid_argument("permutation_rounds: tau must be positive");
  const double denom = std::log(static_cast<double>(ell)) - 2.0 * std::log(static_cast<double>(tau));
  if (!(denom > 0.0)) throw std::invalid_argument("permutation_rounds: need l > tau^2");
  const double k = std::ceil(-std::log(epsilon) / denom);
  return std::max<std::size_t>(1, static_cast<std::size_t>(k));
}

MemResult cluster_mem(const ResponseOracle& oracle, int tau, std::size_t n, double epsilon,
                      const ThresholdSchedule& schedule, std::uint64_t seed,
                      const MemOptions& options) {
  const std::size_t ell = oracle.objects();
  if (n == 0) throw std::invalid_argument("cluster_mem: n must be positive");
  MemResult out;
  if (options.permutations) {
    out.permutations = *options.permutations;
    if (out.permutations.empty()) throw std::invalid_argument("cluster_mem: empty permutation list");
  } else {
    const std::size_t k = permutation_rounds(ell, tau, epsilon);
    for (std::size_t r = 0; r < k; ++r) {
      if (options.shuffle) {
        Rng rng(derive_seed(seed, {r, 0}));
        out.permutations.push_back(random_permutation(ell, rng));
      } else {
        std::vector<std::size_t> id(ell);
        std::iota(id.begin(), id.end(), std::size_t{0});
        out.permutations.push_back(std::move(id));
      }
    }
  }
  out.rounds = out.permutations.size();
  for (std::size_t r = 0; r < out.rounds; ++r) {
    const auto& order = out.permutations[r];
    if (order.size() != ell) throw std::invalid_argument("cluster_mem: permutation has wrong length");
    ResponseMatrix y = oracle.collect(order, n, derive_seed(seed, {r, 1}));
    const Partition local = cluster_info(estimate_mi_table(y), schedule, n);
    const auto block = local.assignment();
    std::vector<std::size_t> ids(ell);
    std::vector<std::size_t> inverse(ell);
    for (std::size_t p = 0; p < ell; ++p) {
      ids[order[p]] = block[p];
      inverse[order[p]] = p;
    }
    out.round_partitions.push_back(Partition::from_assignment(ids));
    if (r == 0) out.first_round_responses = y.select_rows(inverse);
  }
  out.partition = meet(out.round_partitions);
  return out;
}

UnifiedResult cluster_unified(const ResponseOracle& oracle, int tau, std::size_t n,
                              double epsilon, const FDivergenceSpec& spec,
                              const ThresholdSchedule& mem_schedule,
                              const ThresholdSchedule& temp_schedule, std::uint64_t seed,
                              const UnifiedOptions& options) {
  MemResult mem = cluster_mem(oracle, tau, n, epsilon, mem_schedule, seed, options.mem);
  const std::size_t ell = oracle.objects();
  ResponseMatrix rows;
  if (options.fresh_samples) {
    std::vector<std::size_t> id(ell);
    std::iota(id.begin(), id.end(), std::size_t{0});
    rows = oracle.collect(id, n, derive_seed(seed, {mem.rounds, 2}));
  } else {
    rows = std::move(mem.first_round_responses);
  }
  std::vector<Partition::Cluster> clusters;
  for (const auto& c : mem.partition.clusters()) {
    if (c.size() == 1) {
      clusters.push_back(c);
      continue;
    }
    const Partition sub = cluster_temp(rows.select_rows(c), spec, temp_schedule);
    for (const auto& s : sub.clusters()) {
      Partition::Cluster mapped;
      for (std::size_t x : s) mapped.push_back(c[x]);
      clusters.push_back(std::move(mapped));
    }
  }
  UnifiedResult out;
  out.partition = Partition(ell, std::move(clusters));
  out.info_partition = std::move(mem.partition);
  out.rounds = mem.rounds;
  out.responses = std::move(rows);
  return out;
}

}  // namespace crowdclust
