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


#include "oracles.h"

#include <set>

#include "asgap/fixtures.h"

namespace oracle {

ItemSet Walk(const Policy& pi, const asgap::Realization& phi) {
  ItemSet picked;
  int node = pi.root();
  while (node >= 0) {
    const Policy::Node& n = pi.node(node);
    picked.Insert(n.item);
    auto it = n.children.find(phi[n.item]);
    node = it != n.children.end() ? it->second : n.otherwise;
  }
  return picked;
}

namespace {

bool Agrees(const asgap::Realization& phi, const PartialRealization& psi) {
  for (const auto& o : psi.observations()) {
    if (phi[o.item] != o.state) return false;
  }
  return true;
}

}  // namespace

double PolicyMarginal(const Instance& inst, const PartialRealization& psi,
                      const Policy& pi) {
  const ItemSet dom = psi.Domain();
  double mass = 0.0;
  double total = 0.0;
  for (const auto& w : inst.prior.support()) {
    if (!Agrees(w.states, psi)) continue;
    mass += w.probability;
    total += w.probability *
             (inst.utility->Evaluate(dom.Union(Walk(pi, w.states)), w.states) -
              inst.utility->Evaluate(dom, w.states));
  }
  return total / mass;
}

double ItemMarginal(const Instance& inst, const PartialRealization& psi,
                    ItemId e) {
  return PolicyMarginal(inst, psi, Policy::Path({e}));
}

std::vector<Policy> AllTrees(const std::vector<ItemId>& items,
                             int state_count,
                             const asgap::IndependenceSystem* sys,
                             const ItemSet& chosen) {
  std::vector<Policy> out{Policy{}};
  for (ItemId e : items) {
    if (chosen.Contains(e)) continue;
    ItemSet next = chosen.With(e);
    if (sys && !sys->Contains(next)) continue;
    std::vector<Policy> subtrees = AllTrees(items, state_count, sys, next);
    // Every assignment of a subtree to each state.
    std::vector<std::size_t> pick(state_count, 0);
    while (true) {
      std::map<asgap::StateId, Policy> branches;
      for (int o = 0; o < state_count; ++o) branches[o] = subtrees[pick[o]];
      out.push_back(Policy::Select(e, branches));
      int o = 0;
      while (o < state_count && ++pick[o] == subtrees.size()) pick[o++] = 0;
      if (o == state_count) break;
    }
  }
  return out;
}

double BestTreeValue(const Instance& inst,
                     const asgap::IndependenceSystem& sys,
                     const PartialRealization& psi) {
  std::vector<ItemId> items;
  const ItemSet dom = psi.Domain();
  for (ItemId e = 0; e < inst.n; ++e) {
    if (!dom.Contains(e)) items.push_back(e);
  }
  double best = 0.0;
  for (const Policy& pi : AllTrees(items, inst.state_count, &sys)) {
    best = std::max(best, PolicyMarginal(inst, psi, pi));
  }
  return best;
}

std::vector<PartialRealization> Observable(const Instance& inst) {
  std::set<PartialRealization> seen;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << inst.n); ++m) {
    for (const auto& w : inst.prior.support()) {
      seen.insert(PartialRealization::Restrict(w.states, ItemSet::FromMask(m)));
    }
  }
  return {seen.begin(), seen.end()};
}

namespace {

template <typename Fn>
bool ForPairs(const Instance& inst, Fn fn) {
  std::vector<PartialRealization> all = Observable(inst);
  for (const auto& a : all) {
    for (const auto& b : all) {
      if (!asgap::IsSubrealization(a, b)) continue;
      if (!fn(a, b)) return false;
    }
  }
  return true;
}

}  // namespace

bool AdaptiveHolds(const Instance& inst) {
  return ForPairs(inst, [&](const auto& a, const auto& b) {
    for (ItemId e = 0; e < inst.n; ++e) {
      if (b.Domain().Contains(e)) continue;
      if (ItemMarginal(inst, a, e) < ItemMarginal(inst, b, e) - 1e-9) {
        return false;
      }
    }
    return true;
  });
}

bool PolicyAdaptiveHolds(const Instance& inst) {
  return ForPairs(inst, [&](const auto& a, const auto& b) {
    std::vector<ItemId> items;
    for (ItemId e = 0; e < inst.n; ++e) {
      if (!b.Domain().Contains(e)) items.push_back(e);
    }
    for (const Policy& pi : AllTrees(items, inst.state_count, nullptr)) {
      if (PolicyMarginal(inst, a, pi) < PolicyMarginal(inst, b, pi) - 1e-9) {
        return false;
      }
    }
    return true;
  });
}

bool PolicywiseHolds(const Instance& inst) {
  return ForPairs(inst, [&](const auto& a, const auto& b) {
    const ItemSet dom = b.Domain();
    if (!inst.system->Contains(dom)) return true;
    const ItemSet rest = ItemSet::Range(inst.n).Minus(dom);
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << inst.n); ++m) {
      ItemSet r = ItemSet::FromMask(m);
      if (!r.IsSubsetOf(rest)) continue;
      asgap::RestrictedSystem sys(inst.system, dom, r);
      if (BestTreeValue(inst, sys, a) < BestTreeValue(inst, sys, b) - 1e-9) {
        return false;
      }
    }
    return true;
  });
}

namespace {

class Additive : public asgap::UtilityFunction {
 public:
  double Evaluate(const ItemSet& s, const asgap::Realization& phi) const
      override {
    double total = 0.0;
    for (ItemId e : s.Items()) total += phi[e];
    return total;
  }
};

}  // namespace

Instance AdditiveInstance(const std::vector<double>& p,
                          asgap::SystemPtr system) {
  std::vector<std::vector<double>> marginals;
  for (double q : p) marginals.push_back({1.0 - q, q});
  return Instance(static_cast<int>(p.size()), 2,
                  asgap::ProductPrior(marginals), std::make_shared<Additive>(),
                  std::move(system));
}

}  // namespace oracle
