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

#include "asgap/solvers.h"

#include <algorithm>
#include <numeric>
#include <random>
#include <unordered_map>

namespace asgap {

namespace {

struct MemoKey {
  Mask selected;
  int representative;  // smallest support index of the group
  bool operator==(const MemoKey&) const = default;
};

struct MemoKeyHash {
  std::size_t operator()(const MemoKey& k) const {
    std::uint64_t h = k.selected * 0x9e3779b97f4a7c15ull;
    h ^= static_cast<std::uint64_t>(k.representative) + 0x7f4a7c15ull +
         (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

struct MemoEntry {
  double value;
  ItemId best;  // -1 means stop
};

// Memoized recursion over partial realizations reachable from psi. Once the
// items selected so far are fixed, the consistent support subsets for
// different observations are disjoint, so (selected, smallest index) names a
// partial realization uniquely.
class OptimalSolver {
 public:
  OptimalSolver(const ExactModel& model, const IndependenceSystem& sys,
                const PartialRealization& psi, const SolverOptions& options)
      : model_(model),
        sys_(sys),
        options_(options),
        root_group_(model.Consistent(psi)),
        observed_(psi.Domain().Mask()) {
    if (sys.ground_size() != model.n()) {
      throw Error(ErrorCode::kInvalidInstance,
                  "system ground size disagrees with the instance");
    }
  }

  double Solve() { return Value(0, root_group_); }

  Policy BuildPolicy() {
    Policy pi;
    pi.SetRoot(Build(pi, 0, root_group_));
    return pi;
  }

 private:
  double Value(Mask selected, const Group& group) {
    MemoKey key{selected, group.front()};
    if (auto it = memo_.find(key); it != memo_.end()) return it->second.value;

    const Mask base = observed_ | selected;
    const double mass = model_.Mass(group);
    double best = 0.0;
    ItemId best_item = -1;
    for (ItemId e = 0; e < model_.n(); ++e) {
      if (HasItem(base, e)) continue;
      if (!sys_.Contains(ItemSet::FromMask(selected | Bit(e)))) continue;
      double v = model_.MarginalGain(base, e, group);
      for (const auto& [state, part] : model_.Split(group, e)) {
        v += model_.Mass(part) / mass * Value(selected | Bit(e), part);
      }
      if (v > best) {
        best = v;
        best_item = e;
      }
    }
    if (memo_.size() >= options_.max_memo_entries) {
      throw Error(ErrorCode::kCapacity,
                  "optimal policy search exceeded " +
                      std::to_string(options_.max_memo_entries) +
                      " memoized partial realizations");
    }
    memo_.emplace(key, MemoEntry{best, best_item});
    return best;
  }

  int Build(Policy& pi, Mask selected, const Group& group) {
    Value(selected, group);
    const MemoEntry& entry = memo_.at(MemoKey{selected, group.front()});
    if (entry.best < 0) return Policy::kStop;
    const ItemId e = entry.best;
    int node = pi.AddNode(e);
    for (const auto& [state, part] : model_.Split(group, e)) {
      int child = Build(pi, selected | Bit(e), part);
      pi.SetChild(node, state, child);
    }
    return node;
  }

  const ExactModel& model_;
  const IndependenceSystem& sys_;
  SolverOptions options_;
  Group root_group_;
  Mask observed_;
  std::unordered_map<MemoKey, MemoEntry, MemoKeyHash> memo_;
};

}  // namespace

double OptimalRestrictedValue(const ExactModel& model,
                              const IndependenceSystem& sys,
                              const PartialRealization& psi,
                              const SolverOptions& options) {
  OptimalSolver solver(model, sys, psi, options);
  return solver.Solve();
}

PolicyValue OptimalRestrictedPolicy(const ExactModel& model,
                                    const IndependenceSystem& sys,
                                    const PartialRealization& psi,
                                    const SolverOptions& options) {
  OptimalSolver solver(model, sys, psi, options);
  PolicyValue out;
  out.value = solver.Solve();
  out.policy = solver.BuildPolicy();
  return out;
}

PolicyValue OptimalRestrictedPolicy(const Instance& inst,
                                    const IndependenceSystem& sys,
                                    const PartialRealization& psi,
                                    const SolverOptions& options) {
  ExactModel model(inst);
  return OptimalRestrictedPolicy(model, sys, psi, options);
}

// ---------------------------------------------------------------------------

double ExactMarginalEstimator::Estimate(const PartialRealization& psi,
                                        ItemId e) const {
  Group group = model_.Consistent(psi);
  return model_.MarginalGain(psi.Domain().Mask(), e, group);
}

double ExactMarginalEstimator::EstimateUnconditioned(const ItemSet& selected,
                                                     ItemId e) const {
  return model_.MarginalGain(selected.Mask(), e, model_.All());
}

namespace {

struct GreedyBuilder {
  const Instance& inst;
  const IndependenceSystem& sys;
  const MarginalEstimator& estimator;
  GreedyOptions options;
  Policy pi;

  int Expand(const PartialRealization& psi, const ItemSet& selected,
             const std::vector<int>& group) {
    ItemId best_item = -1;
    double best = 0.0;
    for (ItemId e = 0; e < inst.n; ++e) {
      if (selected.Contains(e)) continue;
      if (!sys.Contains(selected.With(e))) continue;
      double v = estimator.Estimate(psi, e);
      if (best_item < 0 || v > best) {
        best = v;
        best_item = e;
      }
    }
    if (best_item < 0) return Policy::kStop;
    if (options.stop_at_nonpositive && best <= 0.0) return Policy::kStop;

    int node = pi.AddNode(best_item);
    std::map<StateId, std::vector<int>> parts;
    for (int i : group) {
      parts[inst.prior.realization(i)[best_item]].push_back(i);
    }
    for (const auto& [state, part] : parts) {
      int child =
          Expand(psi.With(best_item, state), selected.With(best_item), part);
      pi.SetChild(node, state, child);
    }
    return node;
  }
};

}  // namespace

Policy AdaptiveGreedy(const Instance& inst, const IndependenceSystem& sys,
                      const MarginalEstimator& estimator,
                      const GreedyOptions& options) {
  GreedyBuilder builder{inst, sys, estimator, options, Policy{}};
  std::vector<int> all(inst.prior.size());
  std::iota(all.begin(), all.end(), 0);
  builder.pi.SetRoot(builder.Expand({}, {}, all));
  return builder.pi;
}

Policy NonadaptiveGreedy(const Instance& inst, const IndependenceSystem& sys,
                         const MarginalEstimator& estimator,
                         const GreedyOptions& options) {
  ItemSet selected;
  std::vector<ItemId> order;
  while (true) {
    ItemId best_item = -1;
    double best = 0.0;
    for (ItemId e = 0; e < inst.n; ++e) {
      if (selected.Contains(e)) continue;
      if (!sys.Contains(selected.With(e))) continue;
      double v = estimator.EstimateUnconditioned(selected, e);
      if (best_item < 0 || v > best) {
        best = v;
        best_item = e;
      }
    }
    if (best_item < 0) break;
    if (options.stop_at_nonpositive && best <= 0.0) break;
    selected.Insert(best_item);
    order.push_back(best_item);
  }
  return Policy::Path(order);
}

ItemSet RandomFeasibleSet(const IndependenceSystem& sys, int k,
                          std::uint64_t seed) {
  std::vector<ItemId> order(sys.ground_size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  ItemSet chosen;
  for (ItemId e : order) {
    if (chosen.Size() >= k) break;
    if (sys.Contains(chosen.With(e))) chosen.Insert(e);
  }
  return chosen;
}

Policy RandomPolicy(const Instance& inst, const IndependenceSystem& sys, int k,
                    std::uint64_t seed) {
  if (sys.ground_size() != inst.n) {
    throw Error(ErrorCode::kInvalidInstance,
                "system ground size disagrees with the instance");
  }
  return Policy::Path(RandomFeasibleSet(sys, k, seed).Items());
}

}  // namespace asgap
