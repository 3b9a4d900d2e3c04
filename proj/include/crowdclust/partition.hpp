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

#ifndef CROWDCLUST_PARTITION_HPP_
#define CROWDCLUST_PARTITION_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace crowdclust {

class Rng;

// Object classes are 1..tau. Responses additionally use the null symbol 0.
using Label = int;
using Symbol = unsigned char;

inline constexpr Symbol kNullSymbol = 0;

struct LabelAlphabet {
  int tau = 1;

  explicit LabelAlphabet(int num_classes);

  // Size of the response alphabet, classes plus the null symbol.
  std::size_t response_size() const { return static_cast<std::size_t>(tau) + 1; }
};

// The latent labels T_1..T_l of the objects to be clustered, with an
// optional class prior.
class ObjectSequence {
 public:
  ObjectSequence(int tau, std::vector<Label> labels,
                 std::optional<std::vector<double>> prior = std::nullopt);

  // Draws l labels i.i.d. from `prior` (uniform when empty).
  static ObjectSequence draw(int tau, std::size_t ell,
                             std::span<const double> prior, Rng& rng);

  int tau() const { return tau_; }
  std::size_t size() const { return labels_.size(); }
  Label operator[](std::size_t i) const { return labels_[i]; }
  const std::vector<Label>& labels() const { return labels_; }
  const std::optional<std::vector<double>>& prior() const { return prior_; }

  // Labels reordered so that position p holds object order[p].
  ObjectSequence permuted(std::span<const std::size_t> order) const;

 private:
  int tau_;
  std::vector<Label> labels_;
  std::optional<std::vector<double>> prior_;
};

// A partition of {0, ..., ground_size-1} held in canonical form: indices
// sorted within each cluster, clusters sorted by their minimum element.
// Canonical form makes equality of partitions plain value equality.
class Partition {
 public:
  using Cluster = std::vector<std::size_t>;

  Partition() = default;
  Partition(std::size_t ground_size, std::vector<Cluster> clusters);

  // Builds from block ids (any integers); objects sharing an id share a cluster.
  static Partition from_assignment(std::span<const std::size_t> block_ids);
  // Convenience for literals written with 1-based object numbers.
  static Partition from_one_based(std::size_t ground_size,
                                  const std::vector<std::vector<std::size_t>>& clusters);
  static Partition singletons(std::size_t ground_size);
  static Partition whole(std::size_t ground_size);

  std::size_t ground_size() const { return ground_size_; }
  std::size_t size() const { return clusters_.size(); }
  const std::vector<Cluster>& clusters() const { return clusters_; }

  // Cluster index of every object.
  std::vector<std::size_t> assignment() const;

  // JSON array of sorted arrays of 1-based indices.
  std::string to_json() const;

  bool operator==(const Partition&) const = default;

 private:
  std::size_t ground_size_ = 0;
  std::vector<Cluster> clusters_;
};

// P*(T^l): objects grouped exactly by equal labels.
Partition correct_partition(const ObjectSequence& seq);

// True iff every cluster of `finer` lies inside some cluster of `coarser`.
bool refines(const Partition& finer, const Partition& coarser);

// Coarsest common refinement (lattice meet) of a nonempty list.
Partition meet(std::span<const Partition> parts);

// 0/1 block error: true iff the partitions differ.
bool clustering_error(const Partition& estimate, const Partition& truth);

}  // namespace crowdclust

#endif  // CROWDCLUST_PARTITION_HPP_
