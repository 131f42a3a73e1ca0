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

// Enumeration backbone shared by the exact solvers and checkers. Items are
// addressed by 64-bit masks and realizations by their index in the prior's
// support.

#ifndef ASGAP_EXACT_MODEL_H_
#define ASGAP_EXACT_MODEL_H_

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "asgap/core.h"

namespace asgap {

// Compensated summation; order-insensitive to within rounding of the
// compensation term.
class NeumaierSum {
 public:
  void Add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      compensation_ += (sum_ - t) + x;
    } else {
      compensation_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double Total() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

using Mask = std::uint64_t;

inline bool HasItem(Mask m, ItemId e) { return (m >> e) & 1u; }
inline Mask Bit(ItemId e) { return Mask{1} << e; }

// A set of support indices, kept sorted.
using Group = std::vector<int>;

class ExactModel {
 public:
  // Utility values are tabulated eagerly when 2^n * |support| is at most
  // `table_budget`; otherwise every query calls the utility function.
  explicit ExactModel(const Instance& inst, std::size_t table_budget = 1 << 18);

  const Instance& instance() const { return *inst_; }
  int n() const { return inst_->n; }
  int support_size() const { return inst_->prior.size(); }
  double probability(int i) const { return inst_->prior.probability(i); }
  StateId state(int i, ItemId e) const {
    return inst_->prior.realization(i)[e];
  }

  // f(mask, phi_i).
  double Value(Mask mask, int i) const;
  double EmptySetValue() const;

  Group All() const;
  // Support indices consistent with psi; kUnobservable when empty.
  Group Consistent(const PartialRealization& psi) const;
  double Mass(std::span<const int> group) const;

  // Splits `group` by the state of item e, ordered by state id.
  std::vector<std::pair<StateId, Group>> Split(const Group& group,
                                               ItemId e) const;

  // E[f(base + e) - f(base) | group], weights normalized by the group mass.
  double MarginalGain(Mask base, ItemId e, const Group& group) const;

 private:
  const Instance* inst_;
  bool tabulated_ = false;
  std::vector<double> table_;
};

}  // namespace asgap

#endif  // ASGAP_EXACT_MODEL_H_
