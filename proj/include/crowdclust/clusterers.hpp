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

#ifndef CROWDCLUST_CLUSTERERS_HPP_
#define CROWDCLUST_CLUSTERERS_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "crowdclust/crowd_sim.hpp"
#include "crowdclust/divergence.hpp"
#include "crowdclust/mi_table.hpp"
#include "crowdclust/partition.hpp"

namespace crowdclust {

struct ThresholdSchedule {
  enum class Branch { tv_alpha, f_beta, info_alpha };

  double c1 = 1.0;
  double exponent = 0.25;
  Branch branch = Branch::tv_alpha;

  void validate() const;
  // gamma_n = c1 * n^(-exponent)
  double gamma(std::size_t n) const;
};

// Symmetric matrix of pairwise dissimilarities between objects.
using DivergenceMatrix = std::vector<std::vector<double>>;

// Pairwise divergences of the empirical response pmfs. Total variation uses
// the half-L1 distance; other generators use max(D_f(q_i||q_j), D_f(q_j||q_i)).
DivergenceMatrix empirical_divergences(const ResponseMatrix& responses,
                                       const FDivergenceSpec& spec);

// Clusters of the threshold graph {(i, j): d[i][j] <= gamma}. Connected
// components that are cliques are kept whole; any other component is split by
// repeatedly removing its maximum clique (lowest indices win ties).
Partition cluster_threshold_graph(const DivergenceMatrix& d, double gamma);

Partition cluster_temp(const ResponseMatrix& responses, const FDivergenceSpec& spec,
                       const ThresholdSchedule& schedule);

Partition cluster_info(const MiTable& mi, const ThresholdSchedule& schedule, std::size_t n);
// Same loop with an explicit tolerance instead of a schedule.
Partition cluster_info(const MiTable& mi, double gamma);

// Plug-in estimates of I(Y_i; Y_{i-1}, Y_j) from the rows of one response matrix.
MiTable estimate_mi_table(const ResponseMatrix& responses);

// k = ceil(-ln eps / (ln l - 2 ln tau)), at least 1. Requires l > tau^2.
std::size_t permutation_rounds(std::size_t ell, int tau, double epsilon);

struct MemOptions {
  // Fixed orders (each a permutation of the objects) replacing the random draws.
  std::optional<std::vector<std::vector<std::size_t>>> permutations;
  // When false the k rounds all use the identity order.
  bool shuffle = true;
};

struct MemResult {
  Partition partition;
  std::size_t rounds = 0;
  // Responses of the first round, rows in original object order.
  ResponseMatrix first_round_responses;
  std::vector<std::vector<std::size_t>> permutations;
  std::vector<Partition> round_partitions;
};

MemResult cluster_mem(const ResponseOracle& oracle, int tau, std::size_t n, double epsilon,
                      const ThresholdSchedule& schedule, std::uint64_t seed,
                      const MemOptions& options = {});

struct UnifiedOptions {
  MemOptions mem;
  // Draw a new identity-order matrix for the refinement stage instead of
  // reusing the first round's responses.
  bool fresh_samples = false;
};

struct UnifiedResult {
  Partition partition;
  Partition info_partition;
  std::size_t rounds = 0;
  // Rows (original object order) the refinement stage clustered.
  ResponseMatrix responses;
};

UnifiedResult cluster_unified(const ResponseOracle& oracle, int tau, std::size_t n,
                              double epsilon, const FDivergenceSpec& spec,
                              const ThresholdSchedule& mem_schedule,
                              const ThresholdSchedule& temp_schedule, std::uint64_t seed,
                              const UnifiedOptions& options = {});

}  // namespace crowdclust

#endif  // CROWDCLUST_CLUSTERERS_HPP_
