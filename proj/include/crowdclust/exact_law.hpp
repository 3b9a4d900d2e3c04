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

#ifndef CROWDCLUST_EXACT_LAW_HPP_
#define CROWDCLUST_EXACT_LAW_HPP_

#include <cstddef>
#include <vector>

#include "crowdclust/crowd_sim.hpp"
#include "crowdclust/divergence.hpp"
#include "crowdclust/mi_table.hpp"
#include "crowdclust/partition.hpp"

namespace crowdclust {

// Exact information quantities of one memory worker's column, obtained by
// enumerating every response sequence over the emitted symbols.
struct ExactLaw {
  std::vector<Symbol> support;
  // marginals[i][y] = P(Y_i = y) over the full response alphabet.
  std::vector<std::vector<double>> marginals;
  // I(Y_i; Y_{i-1}, Y_j) for all j < i.
  MiTable triple;
  // I(Y_i; Y_j) for all j < i.
  MiTable pairwise;
  // I(Y_i; Y_{N_i}); zero for the first position.
  std::vector<double> neighbor_information;
};

// Largest sequence length accepted by the enumeration.
inline constexpr std::size_t kMaxExactLength = 14;

ExactLaw exact_response_law(const MemoryWorkerModel& model, const ObjectSequence& labels);

MiTable exact_mi_table(const MemoryWorkerModel& model, const ObjectSequence& labels);

// Half the gap between the weakest neighbour information and the strongest
// non-neighbour statistic I(Y_i; Y_{i-1}, Y_j). Positions whose previous
// object is already their same-class predecessor carry no non-neighbour gap
// and are left out of the maximum.
double memory_quality(const MemoryWorkerModel& model, const ObjectSequence& labels);
double memory_quality(const ExactLaw& law, const MemoryWorkerModel& model,
                      const ObjectSequence& labels);

// Minimum over ordered class pairs of the divergence between class channels.
// Total variation uses the half-L1 distance.
double distance_quality(const std::vector<Pmf>& channels, const FDivergenceSpec& spec);
double distance_quality(const WorkerModel& model, const FDivergenceSpec& spec);

}  // namespace crowdclust

#endif  // CROWDCLUST_EXACT_LAW_HPP_
