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

#include "asgap/exact_model.h"

#include <cmath>
#include <numeric>

namespace asgap {

ExactModel::ExactModel(const Instance& inst, std::size_t table_budget)
    : inst_(&inst) {
  if (inst.n > 62) {
    throw Error(ErrorCode::kCapacity,
                "exact evaluation supports at most 62 items, got " +
                    std::to_string(inst.n));
  }
  const std::size_t m = static_cast<std::size_t>(inst.prior.size());
  if (inst.n <= 24 && (std::size_t{1} << inst.n) * m <= table_budget) {
    const Mask subsets = Mask{1} << inst.n;
    table_.resize(subsets * m);
    for (Mask s = 0; s < subsets; ++s) {
      ItemSet set = ItemSet::FromMask(s);
      for (std::size_t i = 0; i < m; ++i) {
        table_[s * m + i] =
            inst.utility->Evaluate(set, inst.prior.realization(i));
      }
    }
    tabulated_ = true;
  }
}

double ExactModel::Value(Mask mask, int i) const {
  if (tabulated_) {
    return table_[mask * static_cast<std::size_t>(support_size()) + i];
  }
  return inst_->utility->Evaluate(ItemSet::FromMask(mask),
                                  inst_->prior.realization(i));
}

double ExactModel::EmptySetValue() const {
  NeumaierSum sum;
  for (int i = 0; i < support_size(); ++i) {
    sum.Add(probability(i) * Value(0, i));
  }
  return sum.Total();
}

Group ExactModel::All() const {
  Group g(support_size());
  std::iota(g.begin(), g.end(), 0);
  return g;
}

Group ExactModel::Consistent(const PartialRealization& psi) const {
  Group g;
  for (int i = 0; i < support_size(); ++i) {
    if (IsConsistent(inst_->prior.realization(i), psi)) g.push_back(i);
  }
  if (g.empty()) {
    throw Error(ErrorCode::kUnobservable,
                "no realization is consistent with " + psi.ToString());
  }
  return g;
}

double ExactModel::Mass(std::span<const int> group) const {
  NeumaierSum sum;
  for (int i : group) sum.Add(probability(i));
  return sum.Total();
}

std::vector<std::pair<StateId, Group>> ExactModel::Split(const Group& group,
                                                         ItemId e) const {
  std::vector<std::pair<StateId, Group>> parts;
  for (int i : group) {
    StateId o = state(i, e);
    auto it = parts.begin();
    while (it != parts.end() && it->first < o) ++it;
    if (it == parts.end() || it->first != o) {
      it = parts.insert(it, {o, Group{}});
    }
    it->second.push_back(i);
  }
  return parts;
}

double ExactModel::MarginalGain(Mask base, ItemId e, const Group& group) const {
  const Mask with = base | Bit(e);
  if (with == base) return 0.0;
  NeumaierSum sum;
  NeumaierSum mass;
  for (int i : group) {
    sum.Add(probability(i) * (Value(with, i) - Value(base, i)));
    mass.Add(probability(i));
  }
  return sum.Total() / mass.Total();
}

}  // namespace asgap
