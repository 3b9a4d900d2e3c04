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

#ifndef CROWDCLUST_CROWD_SIM_HPP_
#define CROWDCLUST_CROWD_SIM_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <variant>
#include <vector>

#include "crowdclust/divergence.hpp"
#include "crowdclust/partition.hpp"

namespace crowdclust {

// l x n matrix of worker responses over {0 = null, 1..tau}.
class ResponseMatrix {
 public:
  // Memory workers answer a whole column; temporary workers answer one cell.
  enum class Assignment { per_column, per_cell };

  ResponseMatrix() = default;
  ResponseMatrix(std::size_t objects, std::size_t workers, std::size_t alphabet_size,
                 Assignment assignment);

  std::size_t objects() const { return objects_; }
  std::size_t workers() const { return workers_; }
  std::size_t alphabet_size() const { return alphabet_size_; }
  Assignment assignment() const { return assignment_; }

  Symbol operator()(std::size_t i, std::size_t j) const { return cells_[i * workers_ + j]; }
  void set(std::size_t i, std::size_t j, Symbol s);
  std::span<const Symbol> row(std::size_t i) const {
    return {cells_.data() + i * workers_, workers_};
  }

  // Identity of the worker who produced cell (i, j).
  std::size_t worker_of(std::size_t i, std::size_t j) const;

  ResponseMatrix select_rows(std::span<const std::size_t> rows) const;

  // One line per object, comma-separated integer symbols (null = 0).
  void write_csv(std::ostream& os) const;

  bool operator==(const ResponseMatrix&) const = default;

 private:
  std::size_t objects_ = 0;
  std::size_t workers_ = 0;
  std::size_t alphabet_size_ = 0;
  Assignment assignment_ = Assignment::per_column;
  std::vector<Symbol> cells_;
};

// Memoryless workers: every response to an object of class t is an
// independent draw from the pool-averaged channel Q_t.
struct TemporaryWorkerModel {
  // channels[t-1] = Q_t over the tau+1 response symbols.
  std::vector<Pmf> channels;
  // Each temporary worker follows (1-s) Q_t + s * delta_u with u ~ Q_t, so
  // individual workers differ while the pool average stays Q_t.
  double heterogeneity = 0.0;

  int tau() const { return static_cast<int>(channels.size()); }
  void validate() const;
};

// Y_i copies one of the zeta most recent same-class responses with
// probability copy_prob, otherwise it is a fresh draw from Q_t. Marginals
// equal Q_t exactly at every position.
struct SameClassCopy {
  double copy_prob = 0.0;
};

// Binary inertial channel on symbols {1, 2}: the response repeats the most
// recent same-class response with probability 1/2 + epsilon. The first
// response of each class is uniform.
struct InertialCopy {
  double epsilon = 0.0;

  // Epsilon for which I(Y_i; Y_prev_same_class) = 2 theta_m.
  static InertialCopy for_memory_quality(double theta_m);
};

// Two-class channel with class-dependent transition matrices
//   class 1: P(1|1) = a, P(2|2) = b;  class 2: P(1|1) = b, P(2|2) = a
// and marginals P(Y = t | T = t) = p.
struct UnifiedConverse {
  double p = 0.5;
  double a = 0.5;
  double b = 0.5;

  // Solves a p + (1-b)(1-p) = p together with
  // h(p) - p h(a) - (1-p) h(b) = 2 theta_m by bisection on a in [p, 1].
  static UnifiedConverse solve(double p, double theta_m);
  double neighbor_information() const;
};

// Same-class copy plus an anchoring term: with probability anchor_prob the
// response repeats Y_{i-1} whatever its class. Marginals equal Q_t only
// approximately when anchor_prob > 0.
struct FullMarkov {
  double copy_prob = 0.0;
  double anchor_prob = 0.0;
};

using MemoryVariant = std::variant<SameClassCopy, InertialCopy, UnifiedConverse, FullMarkov>;

struct MemoryWorkerModel {
  int tau = 2;
  // Q_t for the copy variants; ignored by the binary converse channels.
  std::vector<Pmf> base_channels;
  int memory_depth = 1;
  MemoryVariant variant = SameClassCopy{};

  void validate() const;
  std::size_t alphabet_size() const { return static_cast<std::size_t>(tau) + 1; }

  // Law of Y_i given T_i = t (exact for all variants but FullMarkov).
  std::vector<Pmf> class_marginals() const;

  // Symbols that can ever be emitted.
  std::vector<Symbol> support() const;

  // Conditional pmf of the next response given the previous response (null
  // pointer at i = 0) and the most recent same-class responses, most recent
  // first. `out` has alphabet_size() entries.
  void kernel(Label t, const Symbol* previous, std::span<const Symbol> recent_same_class,
              std::span<double> out) const;
};

using WorkerModel = std::variant<TemporaryWorkerModel, MemoryWorkerModel>;

int model_tau(const WorkerModel& model);
std::size_t model_alphabet_size(const WorkerModel& model);

// Neighbours of object i: {i-1} together with the zeta most recent earlier
// objects of the same class, sorted ascending. Empty for i = 0.
std::vector<std::size_t> neighbors(const ObjectSequence& labels, std::size_t i, int zeta);

// For each position, the up to zeta most recent earlier same-class
// positions, most recent first.
std::vector<std::vector<std::size_t>> same_class_history(const ObjectSequence& labels, int zeta);

ResponseMatrix sample_temporary(const TemporaryWorkerModel& model, const ObjectSequence& labels,
                                std::size_t n, std::uint64_t seed);
ResponseMatrix sample_memory(const MemoryWorkerModel& model, const ObjectSequence& labels,
                             std::size_t n, std::uint64_t seed);
ResponseMatrix sample_responses(const WorkerModel& model, const ObjectSequence& labels,
                                std::size_t n, std::uint64_t seed);

struct PermutedDraw {
  ObjectSequence labels;
  ResponseMatrix responses;
};

// Fresh responses for the objects presented in the order given by
// `permutation` (position p shows object permutation[p]); memory follows the
// new order.
PermutedDraw resample_permutation(const WorkerModel& model, const ObjectSequence& labels,
                                  std::span<const std::size_t> permutation, std::size_t n,
                                  std::uint64_t seed);

// Channels Q_t = (1-s) U + s delta_t over the class symbols (no null mass);
// every pair is at total variation distance s.
std::vector<Pmf> symmetric_channels(int tau, double theta_d);

// Access to a crowd: the decoder chooses an ordering of the objects and a
// sample budget; the crowd answers. Labels stay hidden behind this interface.
class ResponseOracle {
 public:
  virtual ~ResponseOracle() = default;
  virtual std::size_t objects() const = 0;
  virtual std::size_t alphabet_size() const = 0;
  // Row p of the result holds the responses to object order[p].
  virtual ResponseMatrix collect(std::span<const std::size_t> order, std::size_t n,
                                 std::uint64_t seed) const = 0;
};

class SimulatedCrowd final : public ResponseOracle {
 public:
  SimulatedCrowd(WorkerModel model, ObjectSequence labels);

  std::size_t objects() const override { return labels_.size(); }
  std::size_t alphabet_size() const override { return model_alphabet_size(model_); }
  ResponseMatrix collect(std::span<const std::size_t> order, std::size_t n,
                         std::uint64_t seed) const override;

  const ObjectSequence& labels() const { return labels_; }
  const WorkerModel& model() const { return model_; }

 private:
  WorkerModel model_;
  ObjectSequence labels_;
};

}  // namespace crowdclust

#endif  // CROWDCLUST_CROWD_SIM_HPP_
