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

// Policy construction: the exact optimal restricted policy, adaptive and
// non-adaptive greedy, and the random baseline.

#ifndef ASGAP_SOLVERS_H_
#define ASGAP_SOLVERS_H_

#include <cstddef>
#include <cstdint>

#include "asgap/core.h"
#include "asgap/exact_model.h"
#include "asgap/independence.h"
#include "asgap/policy.h"

namespace asgap {

struct PolicyValue {
  double value = 0.0;
  Policy policy;
};

struct SolverOptions {
  // Upper bound on distinct partial realizations memoized by one solve.
  std::size_t max_memo_entries = 1'000'000;
};

// The best policy whose selections (on top of psi, excluding dom(psi)) stay
// inside `sys`, together with f_avg(pi | psi). Ties go to the lowest item and
// the empty continuation wins ties with zero.
PolicyValue OptimalRestrictedPolicy(const Instance& inst,
                                    const IndependenceSystem& sys,
                                    const PartialRealization& psi,
                                    const SolverOptions& options = {});

// Same recursion on a prebuilt model; skips tree construction.
double OptimalRestrictedValue(const ExactModel& model,
                              const IndependenceSystem& sys,
                              const PartialRealization& psi,
                              const SolverOptions& options = {});
PolicyValue OptimalRestrictedPolicy(const ExactModel& model,
                                    const IndependenceSystem& sys,
                                    const PartialRealization& psi,
                                    const SolverOptions& options = {});

// Source of item marginals for the greedy policies.
class MarginalEstimator {
 public:
  virtual ~MarginalEstimator() = default;
  // f_avg(e | psi), exactly or approximately.
  virtual double Estimate(const PartialRealization& psi, ItemId e) const = 0;
  // E[f(S + e, Phi) - f(S, Phi)] with no conditioning.
  virtual double EstimateUnconditioned(const ItemSet& selected,
                                       ItemId e) const = 0;
};

class ExactMarginalEstimator : public MarginalEstimator {
 public:
  explicit ExactMarginalEstimator(const Instance& inst) : model_(inst) {}
  double Estimate(const PartialRealization& psi, ItemId e) const override;
  double EstimateUnconditioned(const ItemSet& selected,
                               ItemId e) const override;

 private:
  ExactModel model_;
};

struct GreedyOptions {
  bool stop_at_nonpositive = false;
};

// Selects the feasible item of largest estimated marginal given everything
// observed so far. The tree is expanded over the prior's support only.
Policy AdaptiveGreedy(const Instance& inst, const IndependenceSystem& sys,
                      const MarginalEstimator& estimator,
                      const GreedyOptions& options = {});

// Greedy on expected set utility before any observation; a path policy.
Policy NonadaptiveGreedy(const Instance& inst, const IndependenceSystem& sys,
                         const MarginalEstimator& estimator,
                         const GreedyOptions& options = {});

// Items in uniformly random order, kept while feasible, until k are chosen.
ItemSet RandomFeasibleSet(const IndependenceSystem& sys, int k,
                          std::uint64_t seed);
Policy RandomPolicy(const Instance& inst, const IndependenceSystem& sys, int k,
                    std::uint64_t seed);

}  // namespace asgap

#endif  // ASGAP_SOLVERS_H_
