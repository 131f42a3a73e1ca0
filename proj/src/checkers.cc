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

#include "asgap/checkers.h"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <map>
#include <set>
#include <unordered_map>

#include "asgap/independence.h"
#include "asgap/solvers.h"

namespace asgap {

namespace {

bool DomainLess(Mask a, Mask b) {
  int sa = std::popcount(a);
  int sb = std::popcount(b);
  if (sa != sb) return sa < sb;
  return ItemSet::FromMask(a).Items() < ItemSet::FromMask(b).Items();
}

// An observable partial realization with its cached conditioning.
struct Observed {
  PartialRealization psi;
  Mask domain;
  Group group;
};

std::vector<Observed> EnumerateObserved(const ExactModel& model,
                                        std::size_t cap) {
  if (model.n() > kDefaultEnumerationCap) {
    throw Error(ErrorCode::kCapacity,
                "exhaustive checks support at most " +
                    std::to_string(kDefaultEnumerationCap) + " items");
  }
  std::vector<Mask> domains;
  for (Mask d = 0; d < (Mask{1} << model.n()); ++d) domains.push_back(d);
  std::sort(domains.begin(), domains.end(), DomainLess);

  std::vector<Observed> out;
  for (Mask d : domains) {
    std::map<std::vector<StateId>, Group> by_states;
    std::vector<ItemId> items = ItemSet::FromMask(d).Items();
    for (int i = 0; i < model.support_size(); ++i) {
      std::vector<StateId> states;
      states.reserve(items.size());
      for (ItemId e : items) states.push_back(model.state(i, e));
      by_states[states].push_back(i);
    }
    for (auto& [states, group] : by_states) {
      std::vector<Observation> obs;
      for (std::size_t j = 0; j < items.size(); ++j) {
        obs.push_back({items[j], states[j]});
      }
      out.push_back({PartialRealization(std::move(obs)), d, std::move(group)});
      if (out.size() > cap) {
        throw Error(ErrorCode::kCapacity,
                    "more than " + std::to_string(cap) +
                        " observable partial realizations");
      }
    }
  }
  return out;
}

// Indices j > i such that out[j] strictly extends out[i], in order.
std::vector<int> Extensions(const std::vector<Observed>& all, int i) {
  std::vector<int> ext;
  const Observed& a = all[i];
  for (int j = i + 1; j < static_cast<int>(all.size()); ++j) {
    const Observed& b = all[j];
    if ((a.domain & ~b.domain) != 0 || a.domain == b.domain) continue;
    if (IsSubrealization(a.psi, b.psi)) ext.push_back(j);
  }
  return ext;
}

// Gaps closer than this are treated as equal when choosing a witness tree.
constexpr double kTieTolerance = 1e-12;

// min over deterministic trees on the items outside `forbidden` of
// f_avg(pi | psi_a) - f_avg(pi | psi_b).
class PolicyGapMinimizer {
 public:
  PolicyGapMinimizer(const ExactModel& model, const Observed& a,
                     const Observed& b, std::size_t max_memo)
      : model_(model),
        dom_a_(a.domain),
        dom_b_(b.domain),
        mass_a_(model.Mass(a.group)),
        mass_b_(model.Mass(b.group)),
        in_b_(model.support_size(), false),
        root_(a.group),
        max_memo_(max_memo) {
    for (int i : b.group) in_b_[i] = true;
  }

  double Solve() { return Min(0, root_); }

  Policy BuildPolicy() {
    Policy pi;
    pi.SetRoot(Build(pi, 0, root_));
    return pi;
  }

 private:
  double Leaf(Mask selected, const Group& group) const {
    NeumaierSum sum;
    for (int i : group) {
      const double p = model_.probability(i);
      sum.Add(p / mass_a_ *
              (model_.Value(dom_a_ | selected, i) - model_.Value(dom_a_, i)));
      if (in_b_[i]) {
        sum.Add(-p / mass_b_ * (model_.Value(dom_b_ | selected, i) -
                                model_.Value(dom_b_, i)));
      }
    }
    return sum.Total();
  }

  struct Best {
    double value;
    int size;  // nodes in the minimizing tree
    ItemId item;
  };

  double Min(Mask selected, const Group& group) {
    return Solve(selected, group).value;
  }

  // Minimizers within kTieTolerance are ranked by tree size, then item.
  const Best& Solve(Mask selected, const Group& group) {
    const std::uint64_t key = KeyOf(selected, group);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    Best best{Leaf(selected, group), 0, -1};
    const Mask blocked = dom_b_ | selected;
    for (ItemId e = 0; e < model_.n(); ++e) {
      if (HasItem(blocked, e)) continue;
      double v = 0.0;
      int size = 1;
      for (const auto& [state, part] : model_.Split(group, e)) {
        const Best& child = Solve(selected | Bit(e), part);
        v += child.value;
        size += child.size;
      }
      if (v < best.value - kTieTolerance ||
          (v <= best.value + kTieTolerance && size < best.size)) {
        best = Best{v, size, e};
      }
    }
    if (memo_.size() >= max_memo_) {
      throw Error(ErrorCode::kCapacity, "policy enumeration budget exceeded");
    }
    return memo_.emplace(key, best).first->second;
  }

  int Build(Policy& pi, Mask selected, const Group& group) {
    const ItemId e = Solve(selected, group).item;
    if (e < 0) return Policy::kStop;
    int node = pi.AddNode(e);
    for (const auto& [state, part] : model_.Split(group, e)) {
      pi.SetChild(node, state, Build(pi, selected | Bit(e), part));
    }
    return node;
  }

  std::uint64_t KeyOf(Mask selected, const Group& group) const {
    return selected * static_cast<std::uint64_t>(model_.support_size()) +
           static_cast<std::uint64_t>(group.front());
  }

  const ExactModel& model_;
  Mask dom_a_;
  Mask dom_b_;
  double mass_a_;
  double mass_b_;
  std::vector<bool> in_b_;
  Group root_;
  std::size_t max_memo_;
  std::unordered_map<std::uint64_t, Best> memo_;
};

Observed MakeObserved(const ExactModel& model, const PartialRealization& psi) {
  return Observed{psi, psi.Domain().Mask(), model.Consistent(psi)};
}

CheckReport PairReport(const ExactModel& model, const Observed& a,
                       const Observed& b, std::size_t max_memo) {
  PolicyGapMinimizer minimizer(model, a, b, max_memo);
  CheckReport report;
  report.comparisons = 1;
  const double gap = minimizer.Solve();
  if (gap < -kTolerance) {
    Policy pi = minimizer.BuildPolicy();
    Witness w;
    w.psi_a = a.psi;
    w.psi_b = b.psi;
    w.lhs = PolicyGain(model, a.domain, b.domain, a.group, pi);
    w.rhs = PolicyGain(model, b.domain, b.domain, b.group, pi);
    w.policy = std::move(pi);
    report.holds = false;
    report.witness = std::move(w);
  }
  return report;
}

}  // namespace

std::vector<PartialRealization> ObservablePartialRealizations(
    const ExactModel& model, std::size_t cap) {
  std::vector<PartialRealization> out;
  for (Observed& o : EnumerateObserved(model, cap)) {
    out.push_back(std::move(o.psi));
  }
  return out;
}

CheckReport CheckAdaptive(const Instance& inst, const CheckOptions& options) {
  ExactModel model(inst);
  std::vector<Observed> all =
      EnumerateObserved(model, options.max_partial_realizations);
  std::vector<std::vector<double>> marginals(all.size());
  auto marginals_of = [&](int i) -> const std::vector<double>& {
    if (marginals[i].empty()) {
      marginals[i].resize(model.n());
      for (ItemId e = 0; e < model.n(); ++e) {
        marginals[i][e] = model.MarginalGain(all[i].domain, e, all[i].group);
      }
    }
    return marginals[i];
  };

  CheckReport report;
  for (int i = 0; i < static_cast<int>(all.size()); ++i) {
    for (int j : Extensions(all, i)) {
      const std::vector<double>& lhs = marginals_of(i);
      const std::vector<double>& rhs = marginals_of(j);
      for (ItemId e = 0; e < model.n(); ++e) {
        if (HasItem(all[j].domain, e)) continue;
        ++report.comparisons;
        if (lhs[e] < rhs[e] - kTolerance) {
          report.holds = false;
          report.witness =
              Witness{all[i].psi, all[j].psi, e, std::nullopt, std::nullopt,
                      std::nullopt, lhs[e], rhs[e]};
          return report;
        }
      }
    }
  }
  return report;
}

CheckReport CheckPolicyAdaptive(const Instance& inst,
                                const CheckOptions& options) {
  ExactModel model(inst);
  std::vector<Observed> all =
      EnumerateObserved(model, options.max_partial_realizations);
  CheckReport report;
  for (int i = 0; i < static_cast<int>(all.size()); ++i) {
    for (int j : Extensions(all, i)) {
      CheckReport pair = PairReport(model, all[i], all[j],
                                    options.max_memo_entries);
      ++report.comparisons;
      if (!pair.holds) {
        pair.comparisons = report.comparisons;
        return pair;
      }
    }
  }
  return report;
}

CheckReport CheckPolicyAdaptivePair(const Instance& inst,
                                    const PartialRealization& psi_a,
                                    const PartialRealization& psi_b,
                                    const CheckOptions& options) {
  if (!IsSubrealization(psi_a, psi_b)) {
    throw Error(ErrorCode::kInvalidWitness, "psi_a is not a subrealization");
  }
  ExactModel model(inst);
  return PairReport(model, MakeObserved(model, psi_a),
                    MakeObserved(model, psi_b), options.max_memo_entries);
}

CheckReport RefutePolicyAdaptiveWithWitness(const Instance& inst,
                                            const PartialRealization& psi_a,
                                            const PartialRealization& psi_b,
                                            const Policy& pi) {
  if (!IsSubrealization(psi_a, psi_b)) {
    throw Error(ErrorCode::kInvalidWitness, "psi_a is not a subrealization");
  }
  const ItemSet dom_b = psi_b.Domain();
  double lhs = 0.0;
  double rhs = 0.0;
  try {
    for (const WeightedRealization& w : inst.prior.support()) {
      if (!IsConsistent(w.states, psi_a)) continue;
      if (Execute(pi, w.states).selected.Intersects(dom_b)) {
        throw Error(ErrorCode::kInvalidWitness,
                    "witness policy selects items of dom(psi_b)");
      }
    }
    lhs = MarginalPolicy(inst, psi_a, pi);
    rhs = MarginalPolicy(inst, psi_b, pi);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kInvalidWitness) throw;
    throw Error(ErrorCode::kInvalidWitness, e.what());
  }
  CheckReport report;
  report.comparisons = 1;
  report.holds = lhs >= rhs - kTolerance;
  report.witness = Witness{psi_a, psi_b, std::nullopt, pi, std::nullopt,
                           std::nullopt, lhs, rhs};
  return report;
}

CheckReport CheckPolicywise(const Instance& inst, const CheckOptions& options) {
  ExactModel model(inst);
  std::vector<Observed> all =
      EnumerateObserved(model, options.max_partial_realizations);
  const Mask full = (Mask{1} << model.n()) - 1;
  SolverOptions solver_options{options.max_memo_entries};

  // Optimal value on top of all[j] for restriction (dom(all[j]), R).
  std::map<std::pair<int, Mask>, double> rhs_cache;

  CheckReport report;
  for (int i = 0; i < static_cast<int>(all.size()); ++i) {
    // Optimal value on top of all[i] for restriction (S, R).
    std::map<std::pair<Mask, Mask>, double> lhs_cache;
    for (int j : Extensions(all, i)) {
      const Observed& b = all[j];
      const ItemSet dom_b = ItemSet::FromMask(b.domain);
      if (!inst.system->Contains(dom_b)) continue;
      const Mask free = full & ~b.domain;
      // Every R subset of V \ dom(psi_b), in increasing mask order.
      for (Mask r = 0;; r = (r - free) & free) {
        RestrictedSystem sys(inst.system, dom_b, ItemSet::FromMask(r));
        double rhs;
        if (auto it = rhs_cache.find({j, r}); it != rhs_cache.end()) {
          rhs = it->second;
        } else {
          rhs = OptimalRestrictedValue(model, sys, b.psi, solver_options);
          rhs_cache.emplace(std::make_pair(j, r), rhs);
        }
        double lhs;
        if (auto it = lhs_cache.find({b.domain, r}); it != lhs_cache.end()) {
          lhs = it->second;
        } else {
          lhs = OptimalRestrictedValue(model, sys, all[i].psi, solver_options);
          lhs_cache.emplace(std::make_pair(b.domain, r), lhs);
        }
        ++report.comparisons;
        if (lhs < rhs - kTolerance) {
          PolicyValue pa =
              OptimalRestrictedPolicy(model, sys, all[i].psi, solver_options);
          PolicyValue pb =
              OptimalRestrictedPolicy(model, sys, b.psi, solver_options);
          report.holds = false;
          report.witness = Witness{all[i].psi,         b.psi,
                                   std::nullopt,       std::move(pa.policy),
                                   std::move(pb.policy), ItemSet::FromMask(r),
                                   lhs,                rhs};
          return report;
        }
        if (r == free) break;
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------

namespace {

class ConditionedUtility : public UtilityFunction {
 public:
  ConditionedUtility(std::shared_ptr<const UtilityFunction> base,
                     ItemSet domain)
      : base_(std::move(base)), domain_(std::move(domain)) {}
  double Evaluate(const ItemSet& s, const Realization& phi) const override {
    return base_->Evaluate(s.Union(domain_), phi) -
           base_->Evaluate(domain_, phi);
  }

 private:
  std::shared_ptr<const UtilityFunction> base_;
  ItemSet domain_;
};

}  // namespace

Instance ConditionInstance(const Instance& inst,
                           const PartialRealization& psi) {
  const ItemSet dom = psi.Domain();
  Prior cond = ConditionalPrior(inst.prior, psi);
  auto utility = std::make_shared<ConditionedUtility>(inst.utility, dom);
  auto system = std::make_shared<RestrictedSystem>(
      inst.system, dom, ItemSet::Range(inst.n).Minus(dom));
  return Instance(inst.n, inst.state_count, std::move(cond),
                  std::move(utility), std::move(system));
}

std::string DescribeReport(const CheckReport& report) {
  std::string out = report.holds ? "holds" : "FAILS";
  out += " (" + std::to_string(report.comparisons) + " comparisons)";
  if (report.witness) {
    const Witness& w = *report.witness;
    char buf[128];
    std::snprintf(buf, sizeof(buf), "lhs=%.12g rhs=%.12g", w.lhs, w.rhs);
    out += "\n  psi_a=" + w.psi_a.ToString() + " psi_b=" + w.psi_b.ToString();
    if (w.item) out += " item=" + std::to_string(*w.item);
    if (w.restriction) out += " R={" + w.restriction->Key() + "}";
    if (w.policy) out += "\n  policy=" + w.policy->ToString();
    if (w.policy_b) out += "\n  policy_b=" + w.policy_b->ToString();
    out += "\n  " + std::string(buf);
  }
  return out;
}

}  // namespace asgap
