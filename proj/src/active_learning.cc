// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "asgap/active_learning.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "asgap/exact_model.h"

namespace asgap {

ActiveLearningModel::ActiveLearningModel(std::vector<Hypothesis> hypotheses,
                                         std::vector<int> label_counts,
                                         std::vector<QueryItem> queries)
    : hypotheses_(std::move(hypotheses)),
      label_counts_(std::move(label_counts)),
      queries_(std::move(queries)) {
  if (hypotheses_.empty()) {
    throw Error(ErrorCode::kInvalidParameter, "no hypotheses");
  }
  const int points = static_cast<int>(label_counts_.size());
  for (int c : label_counts_) {
    if (c < 1) throw Error(ErrorCode::kInvalidParameter, "label count < 1");
  }
  NeumaierSum total;
  for (const Hypothesis& h : hypotheses_) {
    if (!(h.prior_mass > 0.0)) {
      throw Error(ErrorCode::kInvalidParameter,
                  "hypothesis masses must be positive");
    }
    if (static_cast<int>(h.labels.size()) != points) {
      throw Error(ErrorCode::kInvalidParameter,
                  "hypothesis label vector has the wrong length");
    }
    for (int x = 0; x < points; ++x) {
      if (h.labels[x] < 0 || h.labels[x] >= label_counts_[x]) {
        throw Error(ErrorCode::kInvalidParameter, "label out of range");
      }
    }
    total.Add(h.prior_mass);
  }
  if (std::abs(total.Total() - 1.0) > kTolerance) {
    throw Error(ErrorCode::kInvalidParameter,
                "hypothesis masses do not sum to one");
  }
  for (const QueryItem& q : queries_) {
    const auto& p = q.points;
    if (p.empty() || p.size() > 2) {
      throw Error(ErrorCode::kInvalidParameter,
                  "a query covers one or two points");
    }
    for (int x : p) {
      if (x < 0 || x >= points) {
        throw Error(ErrorCode::kInvalidParameter, "query point out of range");
      }
    }
    if (p.size() == 2 && p[0] == p[1]) {
      throw Error(ErrorCode::kInvalidParameter, "query repeats a point");
    }
    int states = 1;
    for (int x : p) states *= label_counts_[x];
    state_count_ = std::max(state_count_, states);
  }
  answers_.resize(hypotheses_.size());
  for (std::size_t h = 0; h < hypotheses_.size(); ++h) {
    answers_[h].reserve(queries_.size());
    for (const QueryItem& q : queries_) {
      StateId a = hypotheses_[h].labels[q.points[0]];
      if (q.points.size() == 2) {
        a += label_counts_[q.points[0]] * hypotheses_[h].labels[q.points[1]];
      }
      answers_[h].push_back(a);
    }
  }
}

VersionSpace ActiveLearningModel::Consistent(
    const PartialRealization& psi) const {
  VersionSpace vs;
  NeumaierSum mass;
  for (int h = 0; h < hypothesis_count(); ++h) {
    if (IsConsistent(answers_[h], psi)) {
      vs.hypotheses.push_back(h);
      mass.Add(hypotheses_[h].prior_mass);
    }
  }
  vs.mass = mass.Total();
  return vs;
}

Prior ActiveLearningModel::InducedPrior() const {
  std::map<Realization, NeumaierSum> merged;
  for (int h = 0; h < hypothesis_count(); ++h) {
    merged[answers_[h]].Add(hypotheses_[h].prior_mass);
  }
  std::vector<WeightedRealization> support;
  for (auto& [phi, mass] : merged) support.push_back({phi, mass.Total()});
  return Prior(std::move(support));
}

namespace {

class GbsUtility : public UtilityFunction {
 public:
  explicit GbsUtility(const ActiveLearningModel& model) {
    for (int h = 0; h < model.hypothesis_count(); ++h) {
      answers_.push_back(model.Answers(h));
      mass_.push_back(model.hypotheses()[h].prior_mass);
    }
  }

  double Evaluate(const ItemSet& s, const Realization& phi) const override {
    const std::vector<ItemId> items = s.Items();
    NeumaierSum consistent;
    for (std::size_t h = 0; h < answers_.size(); ++h) {
      bool agrees = true;
      for (ItemId e : items) {
        if (answers_[h][e] != phi[e]) {
          agrees = false;
          break;
        }
      }
      if (agrees) consistent.Add(mass_[h]);
    }
    return 1.0 - consistent.Total();
  }

 private:
  std::vector<std::vector<StateId>> answers_;
  std::vector<double> mass_;
};

}  // namespace

std::shared_ptr<const UtilityFunction> ActiveLearningModel::Utility() const {
  return std::make_shared<GbsUtility>(*this);
}

Instance ActiveLearningModel::BuildInstance(SystemPtr system) const {
  return Instance(query_count(), state_count_, InducedPrior(), Utility(),
                  std::move(system));
}

// ---------------------------------------------------------------------------

double GbsMarginalEstimator::Estimate(const PartialRealization& psi,
                                      ItemId e) const {
  if (psi.StateOf(e)) return 0.0;
  const VersionSpace vs = model_->Consistent(psi);
  if (vs.hypotheses.empty()) {
    throw Error(ErrorCode::kUnobservable, "empty version space");
  }
  std::map<StateId, NeumaierSum> by_answer;
  for (int h : vs.hypotheses) {
    by_answer[model_->Answer(h, e)].Add(model_->hypotheses()[h].prior_mass);
  }
  NeumaierSum squares;
  for (const auto& [a, m] : by_answer) squares.Add(m.Total() * m.Total());
  return vs.mass - squares.Total() / vs.mass;
}

double GbsMarginalEstimator::EstimateUnconditioned(const ItemSet& selected,
                                                   ItemId e) const {
  if (selected.Contains(e)) return 0.0;
  const std::vector<ItemId> items = selected.Items();
  // Mass per answer vector on S, and per answer vector on S + e.
  std::map<std::vector<StateId>, NeumaierSum> before;
  std::map<std::vector<StateId>, NeumaierSum> after;
  for (int h = 0; h < model_->hypothesis_count(); ++h) {
    std::vector<StateId> key;
    key.reserve(items.size() + 1);
    for (ItemId i : items) key.push_back(model_->Answer(h, i));
    const double m = model_->hypotheses()[h].prior_mass;
    before[key].Add(m);
    key.push_back(model_->Answer(h, e));
    after[key].Add(m);
  }
  NeumaierSum gain;
  for (const auto& [k, m] : before) gain.Add(m.Total() * m.Total());
  for (const auto& [k, m] : after) gain.Add(-m.Total() * m.Total());
  return gain.Total();
}

// ---------------------------------------------------------------------------

ActiveLearningInstance GenerateActiveLearningInstance(
    const ActiveLearningParams& params) {
  if (params.hypotheses < 1 || params.points < 1 || params.queries < 1 ||
      params.k < 0) {
    throw Error(ErrorCode::kInvalidParameter,
                "active learning sizes must be positive");
  }
  std::vector<int> label_counts;
  if (params.labels.size() == 1) {
    label_counts.assign(params.points, params.labels[0]);
  } else if (static_cast<int>(params.labels.size()) == params.points) {
    label_counts = params.labels;
  } else {
    throw Error(ErrorCode::kInvalidParameter,
                "labels must be one count or one count per point");
  }

  std::mt19937_64 rng(params.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Hypothesis> hypotheses(params.hypotheses);
  double total = 0.0;
  for (Hypothesis& h : hypotheses) {
    do {
      h.prior_mass = unit(rng);
    } while (h.prior_mass == 0.0);
    total += h.prior_mass;
    h.labels.resize(params.points);
    for (int x = 0; x < params.points; ++x) {
      h.labels[x] =
          std::uniform_int_distribution<int>(0, label_counts[x] - 1)(rng);
    }
  }
  for (Hypothesis& h : hypotheses) h.prior_mass /= total;

  std::vector<QueryItem> queries(params.queries);
  std::uniform_int_distribution<int> point(0, params.points - 1);
  for (QueryItem& q : queries) {
    q.points.push_back(point(rng));
    if (params.points > 1 && unit(rng) < 0.5) {
      int second;
      do {
        second = point(rng);
      } while (second == q.points[0]);
      q.points.push_back(second);
    }
  }

  auto model = std::make_shared<const ActiveLearningModel>(
      std::move(hypotheses), std::move(label_counts), std::move(queries));
  Instance instance = model->BuildInstance(
      MakeCardinality(params.queries, std::min(params.k, params.queries)));
  return {std::move(model), std::move(instance)};
}

std::vector<int> MixedLabelCounts(int points, std::uint64_t seed) {
  std::vector<int> counts(points, 2);
  std::vector<int> order(points);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  const int tenth = points / 10;
  for (int i = 0; i < tenth; ++i) counts[order[i]] = 3;
  for (int i = tenth; i < 2 * tenth; ++i) counts[order[i]] = 4;
  return counts;
}

}  // namespace asgap
