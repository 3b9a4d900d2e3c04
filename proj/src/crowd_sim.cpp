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

#include "crowdclust/crowd_sim.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <ostream>
#include <stdexcept>

#include "crowdclust/info_estimators.hpp"
#include "crowdclust/rng.hpp"

namespace crowdclust {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

ResponseMatrix::ResponseMatrix(std::size_t objects, std::size_t workers,
                               std::size_t alphabet_size, Assignment assignment)
    : objects_(objects),
      workers_(workers),
      alphabet_size_(alphabet_size),
      assignment_(assignment),
      cells_(objects * workers, kNullSymbol) {
  if (alphabet_size_ == 0 || alphabet_size_ > 255) {
    throw std::invalid_argument("ResponseMatrix: alphabet size must be in [1, 255]");
  }
}

void ResponseMatrix::set(std::size_t i, std::size_t j, Symbol s) {
  if (s >= alphabet_size_) throw std::invalid_argument("ResponseMatrix: symbol outside alphabet");
  cells_.at(i * workers_ + j) = s;
}

std::size_t ResponseMatrix::worker_of(std::size_t i, std::size_t j) const {
  return assignment_ == Assignment::per_column ? j : i * workers_ + j;
}

ResponseMatrix ResponseMatrix::select_rows(std::span<const std::size_t> rows) const {
  ResponseMatrix out(rows.size(), workers_, alphabet_size_, assignment_);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r] >= objects_) throw std::out_of_range("ResponseMatrix::select_rows");
    std::copy_n(cells_.begin() + static_cast<std::ptrdiff_t>(rows[r] * workers_), workers_,
                out.cells_.begin() + static_cast<std::ptrdiff_t>(r * workers_));
  }
  return out;
}

void ResponseMatrix::write_csv(std::ostream& os) const {
  for (std::size_t i = 0; i < objects_; ++i) {
    for (std::size_t j = 0; j < workers_; ++j) {
      if (j) os << ',';
      os << static_cast<int>((*this)(i, j));
    }
    os << '\n';
  }
}

namespace {

void validate_channels(const std::vector<Pmf>& channels, int tau, const char* who) {
  if (channels.size() != static_cast<std::size_t>(tau)) {
    throw std::invalid_argument(std::string(who) + ": need one channel per class");
  }
  for (const auto& q : channels) {
    if (q.size() != static_cast<std::size_t>(tau) + 1) {
      throw std::invalid_argument(std::string(who) + ": channel size must be tau+1");
    }
  }
}

constexpr Symbol kOne = 1;
constexpr Symbol kTwo = 2;

}  // namespace

void TemporaryWorkerModel::validate() const {
  if (channels.empty()) throw std::invalid_argument("TemporaryWorkerModel: no channels");
  LabelAlphabet check(tau());
  validate_channels(channels, tau(), "TemporaryWorkerModel");
  if (!(heterogeneity >= 0.0 && heterogeneity <= 1.0)) {
    throw std::invalid_argument("TemporaryWorkerModel: heterogeneity outside [0,1]");
  }
}

InertialCopy InertialCopy::for_memory_quality(double theta_m) {
  if (!(theta_m >= 0.0 && theta_m <= 0.5)) {
    throw std::invalid_argument("InertialCopy: theta_m outside [0, 1/2]");
  }
  return InertialCopy{0.5 - inverse_binary_entropy(1.0 - 2.0 * theta_m)};
}

double UnifiedConverse::neighbor_information() const {
  const double b_safe = std::clamp(b, 0.0, 1.0);
  return binary_entropy(p) - p * binary_entropy(a) - (1.0 - p) * binary_entropy(b_safe);
}

UnifiedConverse UnifiedConverse::solve(double p, double theta_m) {
  if (!(p >= 0.5 && p < 1.0)) throw std::invalid_argument("UnifiedConverse: p outside [1/2, 1)");
  const double target = 2.0 * theta_m;
  if (!(target >= 0.0 && target <= binary_entropy(p))) {
    throw std::invalid_argument("UnifiedConverse: 2 theta_m must lie in [0, h(p)]");
  }
  auto b_of = [p](double a) { return std::clamp(1.0 - p * (1.0 - a) / (1.0 - p), 0.0, 1.0); };
  // Neighbour information is increasing in a on [p, 1]: zero at a = p, h(p) at a = 1.
  double lo = p, hi = 1.0;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    const UnifiedConverse probe{p, mid, b_of(mid)};
    (probe.neighbor_information() < target ? lo : hi) = mid;
  }
  const double a = 0.5 * (lo + hi);
  return UnifiedConverse{p, a, b_of(a)};
}

void MemoryWorkerModel::validate() const {
  LabelAlphabet check(tau);
  if (memory_depth < 1) throw std::invalid_argument("MemoryWorkerModel: memory_depth must be >= 1");
  std::visit(
      Overloaded{
          [&](const SameClassCopy& v) {
            validate_channels(base_channels, tau, "MemoryWorkerModel");
            if (!(v.copy_prob >= 0.0 && v.copy_prob < 1.0)) {
              throw std::invalid_argument("MemoryWorkerModel: copy_prob outside [0,1)");
            }
          },
          [&](const InertialCopy& v) {
            if (tau < 2) throw std::invalid_argument("MemoryWorkerModel: inertial needs tau >= 2");
            if (memory_depth != 1) {
              throw std::invalid_argument("MemoryWorkerModel: inertial channel needs memory_depth 1");
            }
            if (!(v.epsilon >= 0.0 && v.epsilon <= 0.5)) {
              throw std::invalid_argument("MemoryWorkerModel: epsilon outside [0, 1/2]");
            }
          },
          [&](const UnifiedConverse& v) {
            if (tau != 2) throw std::invalid_argument("MemoryWorkerModel: unified channel needs tau = 2");
            if (memory_depth != 1) {
              throw std::invalid_argument("MemoryWorkerModel: unified channel needs memory_depth 1");
            }
            if (!(v.p >= 0.5 && v.p <= 1.0 && v.a >= 0.0 && v.a <= 1.0 && v.b >= 0.0 &&
                  v.b <= 1.0)) {
              throw std::invalid_argument("MemoryWorkerModel: unified parameters out of range");
            }
            if (std::abs(v.a * v.p + (1.0 - v.b) * (1.0 - v.p) - v.p) > 1e-9) {
              throw std::invalid_argument("MemoryWorkerModel: unified channel is not stationary");
            }
          },
          [&](const FullMarkov& v) {
            validate_channels(base_channels, tau, "MemoryWorkerModel");
            if (!(v.copy_prob >= 0.0 && v.anchor_prob >= 0.0 && v.copy_prob + v.anchor_prob < 1.0)) {
              throw std::invalid_argument("MemoryWorkerModel: need copy_prob + anchor_prob < 1");
            }
          },
      },
      variant);
}

std::vector<Pmf> MemoryWorkerModel::class_marginals() const {
  const std::size_t m = alphabet_size();
  return std::visit(
      Overloaded{
          [&](const InertialCopy&) {
            std::vector<double> q(m, 0.0);
            q[kOne] = q[kTwo] = 0.5;
            return std::vector<Pmf>(static_cast<std::size_t>(tau), Pmf(q));
          },
          [&](const UnifiedConverse& v) {
            std::vector<double> q1(m, 0.0), q2(m, 0.0);
            q1[kOne] = v.p;
            q1[kTwo] = 1.0 - v.p;
            q2[kOne] = 1.0 - v.p;
            q2[kTwo] = v.p;
            return std::vector<Pmf>{Pmf(q1), Pmf(q2)};
          },
          [&](const auto&) { return base_channels; },
      },
      variant);
}

std::vector<Symbol> MemoryWorkerModel::support() const {
  std::vector<char> used(alphabet_size(), 0);
  if (std::holds_alternative<InertialCopy>(variant) ||
      std::holds_alternative<UnifiedConverse>(variant)) {
    used[kOne] = used[kTwo] = 1;
  } else {
    for (const auto& q : base_channels) {
      for (std::size_t k = 0; k < q.size(); ++k) {
        if (q[k] > 0.0) used[k] = 1;
      }
    }
  }
  std::vector<Symbol> out;
  for (std::size_t k = 0; k < used.size(); ++k) {
    if (used[k]) out.push_back(static_cast<Symbol>(k));
  }
  return out;
}

void MemoryWorkerModel::kernel(Label t, const Symbol* previous,
                               std::span<const Symbol> recent_same_class,
                               std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  const auto& base = [&]() -> const Pmf& { return base_channels[static_cast<std::size_t>(t - 1)]; };
  std::visit(
      Overloaded{
          [&](const SameClassCopy& v) {
            const Pmf& q = base();
            const double fresh = recent_same_class.empty() ? 1.0 : 1.0 - v.copy_prob;
            for (std::size_t k = 0; k < q.size(); ++k) out[k] = fresh * q[k];
            if (!recent_same_class.empty()) {
              const double share = v.copy_prob / static_cast<double>(recent_same_class.size());
              for (Symbol s : recent_same_class) out[s] += share;
            }
          },
          [&](const FullMarkov& v) {
            const Pmf& q = base();
            double used = 0.0;
            if (!recent_same_class.empty()) {
              const double share = v.copy_prob / static_cast<double>(recent_same_class.size());
              for (Symbol s : recent_same_class) out[s] += share;
              used += v.copy_prob;
            }
            if (previous != nullptr) {
              out[*previous] += v.anchor_prob;
              used += v.anchor_prob;
            }
            for (std::size_t k = 0; k < q.size(); ++k) out[k] += (1.0 - used) * q[k];
          },
          [&](const InertialCopy& v) {
            if (recent_same_class.empty()) {
              out[kOne] = out[kTwo] = 0.5;
              return;
            }
            const Symbol last = recent_same_class.front();
            out[last] = 0.5 + v.epsilon;
            out[last == kOne ? kTwo : kOne] = 0.5 - v.epsilon;
          },
          [&](const UnifiedConverse& v) {
            const bool own_is_one = (t == 1);
            if (recent_same_class.empty()) {
              out[kOne] = own_is_one ? v.p : 1.0 - v.p;
              out[kTwo] = 1.0 - out[kOne];
              return;
            }
            // Stay probabilities: class 1 keeps 1 w.p. a and 2 w.p. b; class 2 swaps roles.
            const Symbol last = recent_same_class.front();
            const double stay_one = own_is_one ? v.a : v.b;
            const double stay_two = own_is_one ? v.b : v.a;
            if (last == kOne) {
              out[kOne] = stay_one;
              out[kTwo] = 1.0 - stay_one;
            } else {
              out[kTwo] = stay_two;
              out[kOne] = 1.0 - stay_two;
            }
          },
      },
      variant);
}

int model_tau(const WorkerModel& model) {
  return std::visit(Overloaded{[](const TemporaryWorkerModel& m) { return m.tau(); },
                               [](const MemoryWorkerModel& m) { return m.tau; }},
                    model);
}

std::size_t model_alphabet_size(const WorkerModel& model) {
  return static_cast<std::size_t>(model_tau(model)) + 1;
}

std::vector<std::vector<std::size_t>> same_class_history(const ObjectSequence& labels, int zeta) {
  if (zeta < 1) throw std::invalid_argument("same_class_history: zeta must be >= 1");
  std::vector<std::deque<std::size_t>> recent(static_cast<std::size_t>(labels.tau()) + 1);
  std::vector<std::vector<std::size_t>> out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto& q = recent[static_cast<std::size_t>(labels[i])];
    out[i].assign(q.begin(), q.end());
    q.push_front(i);
    if (q.size() > static_cast<std::size_t>(zeta)) q.pop_back();
  }
  return out;
}

std::vector<std::size_t> neighbors(const ObjectSequence& labels, std::size_t i, int zeta) {
  if (i >= labels.size()) throw std::out_of_range("neighbors: index out of range");
  if (zeta < 1) throw std::invalid_argument("neighbors: zeta must be >= 1");
  std::vector<std::size_t> out;
  if (i == 0) return out;
  out.push_back(i - 1);
  int found = 0;
  for (std::size_t k = i; k-- > 0 && found < zeta;) {
    if (labels[k] == labels[i]) {
      out.push_back(k);
      ++found;
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

ResponseMatrix sample_temporary(const TemporaryWorkerModel& model, const ObjectSequence& labels,
                                std::size_t n, std::uint64_t seed) {
  model.validate();
  if (n == 0) throw std::invalid_argument("sample_temporary: n must be >= 1");
  if (labels.tau() != model.tau()) throw std::invalid_argument("sample_temporary: tau mismatch");
  const std::size_t m = static_cast<std::size_t>(model.tau()) + 1;
  ResponseMatrix y(labels.size(), n, m, ResponseMatrix::Assignment::per_cell);
  for (std::size_t j = 0; j < n; ++j) {
    Rng rng(derive_seed(seed, {j}));
    for (std::size_t i = 0; i < labels.size(); ++i) {
      const Pmf& q = model.channels[static_cast<std::size_t>(labels[i] - 1)];
      // Each cell has its own worker. A heterogeneous worker first picks a
      // favourite u ~ Q_t and answers u with probability s, else from Q_t.
      std::size_t answer;
      if (model.heterogeneity > 0.0) {
        const auto favourite = rng.categorical(q.mass());
        answer = rng.bernoulli(model.heterogeneity) ? favourite : rng.categorical(q.mass());
      } else {
        answer = rng.categorical(q.mass());
      }
      y.set(i, j, static_cast<Symbol>(answer));
    }
  }
  return y;
}

ResponseMatrix sample_memory(const MemoryWorkerModel& model, const ObjectSequence& labels,
                             std::size_t n, std::uint64_t seed) {
  model.validate();
  if (n == 0) throw std::invalid_argument("sample_memory: n must be >= 1");
  if (labels.tau() != model.tau) throw std::invalid_argument("sample_memory: tau mismatch");
  const std::size_t ell = labels.size();
  const std::size_t m = model.alphabet_size();
  const auto history = same_class_history(labels, model.memory_depth);
  ResponseMatrix y(ell, n, m, ResponseMatrix::Assignment::per_column);
  std::vector<double> law(m);
  std::vector<Symbol> column(ell);
  std::vector<Symbol> recent;
  for (std::size_t j = 0; j < n; ++j) {
    Rng rng(derive_seed(seed, {j}));
    for (std::size_t i = 0; i < ell; ++i) {
      recent.clear();
      for (std::size_t k : history[i]) recent.push_back(column[k]);
      model.kernel(labels[i], i ? &column[i - 1] : nullptr, recent, law);
      column[i] = static_cast<Symbol>(rng.categorical(law));
      y.set(i, j, column[i]);
    }
  }
  return y;
}

ResponseMatrix sample_responses(const WorkerModel& model, const ObjectSequence& labels,
                                std::size_t n, std::uint64_t seed) {
  return std::visit(
      Overloaded{
          [&](const TemporaryWorkerModel& m) { return sample_temporary(m, labels, n, seed); },
          [&](const MemoryWorkerModel& m) { return sample_memory(m, labels, n, seed); },
      },
      model);
}

PermutedDraw resample_permutation(const WorkerModel& model, const ObjectSequence& labels,
                                  std::span<const std::size_t> permutation, std::size_t n,
                                  std::uint64_t seed) {
  if (permutation.size() != labels.size()) {
    throw std::invalid_argument("resample_permutation: permutation has wrong length");
  }
  std::vector<char> seen(labels.size(), 0);
  for (std::size_t x : permutation) {
    if (x >= labels.size() || seen[x]) {
      throw std::invalid_argument("resample_permutation: not a permutation");
    }
    seen[x] = 1;
  }
  ObjectSequence permuted = labels.permuted(permutation);
  ResponseMatrix y = sample_responses(model, permuted, n, seed);
  return PermutedDraw{std::move(permuted), std::move(y)};
}

std::vector<Pmf> symmetric_channels(int tau, double theta_d) {
  LabelAlphabet check(tau);
  if (!(theta_d >= 0.0 && theta_d <= 1.0)) {
    throw std::invalid_argument("symmetric_channels: theta_d outside [0,1]");
  }
  std::vector<Pmf> out;
  for (int t = 1; t <= tau; ++t) {
    std::vector<double> q(static_cast<std::size_t>(tau) + 1, 0.0);
    for (int k = 1; k <= tau; ++k) q[static_cast<std::size_t>(k)] = (1.0 - theta_d) / tau;
    q[static_cast<std::size_t>(t)] += theta_d;
    out.emplace_back(std::move(q));
  }
  return out;
}

SimulatedCrowd::SimulatedCrowd(WorkerModel model, ObjectSequence labels)
    : model_(std::move(model)), labels_(std::move(labels)) {
  std::visit([](const auto& m) { m.validate(); }, model_);
  if (model_tau(model_) != labels_.tau()) throw std::invalid_argument("SimulatedCrowd: tau mismatch");
}

ResponseMatrix SimulatedCrowd::collect(std::span<const std::size_t> order, std::size_t n,
                                       std::uint64_t seed) const {
  return resample_permutation(model_, labels_, order, n, seed).responses;
}

}  // namespace crowdclust
