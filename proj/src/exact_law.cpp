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

#include "crowdclust/exact_law.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "crowdclust/info_estimators.hpp"

namespace crowdclust {

namespace {

class Enumerator {
 public:
  Enumerator(const MemoryWorkerModel& model, const ObjectSequence& labels)
      : model_(model),
        labels_(labels),
        support_(model.support()),
        a_(support_.size()),
        m_(model.alphabet_size()),
        ell_(labels.size()),
        history_(same_class_history(labels, model.memory_depth)),
        column_(ell_),
        code_(ell_),
        law_(ell_, std::vector<double>(m_)) {
    std::size_t leaves = 1;
    for (std::size_t i = 0; i < ell_; ++i) {
      leaves *= a_;
      if (leaves > (std::size_t{1} << 24)) {
        throw std::invalid_argument("exact_response_law: enumeration too large");
      }
    }
    index_of_.assign(m_, a_);
    for (std::size_t k = 0; k < a_; ++k) index_of_[support_[k]] = k;
    triple_.resize(ell_);
    for (std::size_t i = 0; i < ell_; ++i) triple_[i].assign(i * a_ * a_ * a_, 0.0);
    marginal_.assign(ell_, std::vector<double>(m_, 0.0));
    for (std::size_t i = 0; i < ell_; ++i) {
      hood_.push_back(neighbors(labels_, i, model_.memory_depth));
      std::size_t cells = a_;
      for (std::size_t r = 0; r < hood_[i].size(); ++r) cells *= a_;
      hood_joint_.emplace_back(cells, 0.0);
    }
  }

  void run() {
    if (ell_ > 0) descend(0, 1.0);
  }

  ExactLaw finish() const {
    ExactLaw out;
    out.support = support_;
    out.marginals = marginal_;
    out.triple = MiTable(ell_);
    out.pairwise = MiTable(ell_);
    out.neighbor_information.assign(ell_, 0.0);
    std::vector<double> pair(a_ * a_);
    for (std::size_t i = 1; i < ell_; ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        const double* t = triple_[i].data() + j * a_ * a_ * a_;
        out.triple.set(i, j, clamp(mutual_information_bits({t, a_ * a_ * a_}, a_, a_ * a_)));
        std::fill(pair.begin(), pair.end(), 0.0);
        for (std::size_t x = 0; x < a_; ++x) {
          for (std::size_t y = 0; y < a_; ++y) {
            for (std::size_t z = 0; z < a_; ++z) pair[x * a_ + z] += t[(x * a_ + y) * a_ + z];
          }
        }
        out.pairwise.set(i, j, clamp(mutual_information_bits(pair, a_, a_)));
      }
      const auto& joint = hood_joint_[i];
      out.neighbor_information[i] = clamp(mutual_information_bits(joint, a_, joint.size() / a_));
    }
    return out;
  }

 private:
  static double clamp(double v) { return v < 0.0 && v > -1e-12 ? 0.0 : v; }

  void descend(std::size_t i, double prob) {
    if (i == ell_) {
      accumulate(prob);
      return;
    }
    recent_.clear();
    for (std::size_t k : history_[i]) recent_.push_back(column_[k]);
    auto& law = law_[i];
    model_.kernel(labels_[i], i ? &column_[i - 1] : nullptr, recent_, law);
    for (std::size_t k = 0; k < m_; ++k) {
      if (law[k] > 0.0 && index_of_[k] == a_) {
        throw std::logic_error("exact_response_law: kernel left the support");
      }
    }
    for (std::size_t c = 0; c < a_; ++c) {
      const double p = law_[i][support_[c]];
      if (p <= 0.0) continue;
      column_[i] = support_[c];
      code_[i] = c;
      descend(i + 1, prob * p);
    }
  }

  void accumulate(double prob) {
    for (std::size_t i = 0; i < ell_; ++i) {
      marginal_[i][column_[i]] += prob;
      if (i > 0) {
        const std::size_t head = (code_[i] * a_ + code_[i - 1]) * a_;
        double* t = triple_[i].data();
        for (std::size_t j = 0; j < i; ++j) t[j * a_ * a_ * a_ + head + code_[j]] += prob;
      }
      std::size_t cell = code_[i];
      for (std::size_t k : hood_[i]) cell = cell * a_ + code_[k];
      hood_joint_[i][cell] += prob;
    }
  }

  const MemoryWorkerModel& model_;
  const ObjectSequence& labels_;
  std::vector<Symbol> support_;
  std::size_t a_;
  std::size_t m_;
  std::size_t ell_;
  std::vector<std::vector<std::size_t>> history_;
  std::vector<Symbol> column_;
  std::vector<std::size_t> code_;
  std::vector<std::vector<double>> law_;
  std::vector<Symbol> recent_;
  std::vector<std::size_t> index_of_;
  std::vector<std::vector<double>> triple_;
  std::vector<std::vector<double>> marginal_;
  std::vector<std::vector<std::size_t>> hood_;
  std::vector<std::vector<double>> hood_joint_;
};

bool has_same_class_predecessor(const ObjectSequence& labels, std::size_t i) {
  for (std::size_t k = 0; k < i; ++k) {
    if (labels[k] == labels[i]) return true;
  }
  return false;
}

}  // namespace

ExactLaw exact_response_law(const MemoryWorkerModel& model, const ObjectSequence& labels) {
  model.validate();
  if (labels.tau() != model.tau) throw std::invalid_argument("exact_response_law: tau mismatch");
  if (labels.size() > kMaxExactLength) {
    throw std::invalid_argument("exact_response_law: sequence too long for enumeration");
  }
  Enumerator e(model, labels);
  e.run();
  return e.finish();
}

MiTable exact_mi_table(const MemoryWorkerModel& model, const ObjectSequence& labels) {
  return exact_response_law(model, labels).triple;
}

double memory_quality(const MemoryWorkerModel& model, const ObjectSequence& labels) {
  return memory_quality(exact_response_law(model, labels), model, labels);
}

double memory_quality(const ExactLaw& law, const MemoryWorkerModel& model,
                      const ObjectSequence& labels) {
  double weakest = std::numeric_limits<double>::infinity();
  double strongest = 0.0;
  for (std::size_t i = 1; i < labels.size(); ++i) {
    if (!has_same_class_predecessor(labels, i)) continue;
    weakest = std::min(weakest, law.neighbor_information[i]);
    const auto hood = neighbors(labels, i, model.memory_depth);
    if (labels[i - 1] == labels[i]) continue;
    for (std::size_t j = 0; j < i; ++j) {
      if (std::find(hood.begin(), hood.end(), j) != hood.end()) continue;
      strongest = std::max(strongest, law.triple.at(i, j));
    }
  }
  if (weakest == std::numeric_limits<double>::infinity()) return 0.0;
  return 0.5 * (weakest - strongest);
}

double distance_quality(const std::vector<Pmf>& channels, const FDivergenceSpec& spec) {
  if (channels.size() < 2) throw std::invalid_argument("distance_quality: need two classes");
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < channels.size(); ++s) {
    for (std::size_t t = 0; t < channels.size(); ++t) {
      if (s == t) continue;
      const double d = spec.kind() == DivergenceKind::total_variation
                           ? tv_distance(channels[s], channels[t])
                           : f_divergence(spec, channels[s], channels[t]);
      best = std::min(best, d);
    }
  }
  return best;
}

double distance_quality(const WorkerModel& model, const FDivergenceSpec& spec) {
  if (const auto* temp = std::get_if<TemporaryWorkerModel>(&model)) {
    return distance_quality(temp->channels, spec);
  }
  return distance_quality(std::get<MemoryWorkerModel>(model).class_marginals(), spec);
}

}  // namespace crowdclust
