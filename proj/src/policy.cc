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

#include "asgap/policy.h"

#include "asgap/independence.h"

namespace asgap {

Policy Policy::Path(const std::vector<ItemId>& items) {
  Policy pi;
  int prev = kStop;
  for (ItemId e : items) {
    int node = pi.AddNode(e);
    if (prev == kStop) {
      pi.SetRoot(node);
    } else {
      pi.SetDefault(prev, node);
    }
    prev = node;
  }
  if (prev != kStop) pi.SetDefault(prev, kStop);
  return pi;
}

Policy Policy::Select(ItemId item, const std::map<StateId, Policy>& branches,
                      const Policy* otherwise) {
  Policy pi;
  int root = pi.AddNode(item);
  pi.SetRoot(root);
  for (const auto& [state, sub] : branches) {
    int child = pi.Graft(sub);
    pi.SetChild(root, state, child);
  }
  if (otherwise != nullptr) pi.SetDefault(root, pi.Graft(*otherwise));
  return pi;
}

int Policy::AddNode(ItemId item) {
  if (item < 0) throw Error(ErrorCode::kMalformedPolicy, "negative item");
  nodes_.push_back(Node{item, {}, kMissing});
  return static_cast<int>(nodes_.size()) - 1;
}

void Policy::SetChild(int node, StateId o, int child) {
  nodes_.at(node).children[o] = child;
}

void Policy::SetDefault(int node, int child) {
  nodes_.at(node).otherwise = child;
}

int Policy::Next(int node, StateId o) const {
  const Node& n = nodes_.at(node);
  auto it = n.children.find(o);
  int next = it != n.children.end() ? it->second : n.otherwise;
  if (next == kMissing) {
    throw Error(ErrorCode::kMalformedPolicy,
                "no branch for state " + std::to_string(o) + " after item " +
                    std::to_string(n.item));
  }
  return next;
}

int Policy::Graft(const Policy& other) {
  if (other.root_ == kStop) return kStop;
  // Recursive copy keeps shared subtrees shared only if they were reached
  // once; trees built here never share nodes.
  struct Copier {
    const Policy& src;
    Policy& dst;
    int Copy(int i) {
      if (i < 0) return i;
      const Node& n = src.nodes_[i];
      int out = dst.AddNode(n.item);
      for (const auto& [o, c] : n.children) {
        int copied = Copy(c);
        dst.nodes_[out].children[o] = copied;
      }
      int copied = Copy(n.otherwise);
      dst.nodes_[out].otherwise = copied;
      return out;
    }
  };
  Copier copier{other, *this};
  return copier.Copy(other.root_);
}

std::string Policy::ToString() const {
  struct Printer {
    const Policy& pi;
    std::string Print(int i) const {
      if (i == kStop) return "stop";
      if (i == kMissing) return "?";
      const Node& n = pi.nodes_[i];
      std::string out = "(" + std::to_string(n.item) + ":";
      bool first = true;
      for (const auto& [o, c] : n.children) {
        out += (first ? "" : ",") + std::to_string(o) + "=" + Print(c);
        first = false;
      }
      if (n.otherwise != kMissing) {
        out += (first ? "" : ",") + std::string("*=") + Print(n.otherwise);
      }
      return out + ")";
    }
  };
  return Printer{*this}.Print(root_);
}

ExecutionTrace Execute(const Policy& pi, const Realization& phi) {
  ExecutionTrace trace;
  std::vector<Observation> obs;
  int node = pi.root();
  while (node != Policy::kStop) {
    ItemId e = pi.node(node).item;
    if (e >= static_cast<int>(phi.size())) {
      throw Error(ErrorCode::kMalformedPolicy, "policy item out of range");
    }
    if (trace.selected.Contains(e)) {
      throw Error(ErrorCode::kMalformedPolicy,
                  "item " + std::to_string(e) + " repeats on a policy path");
    }
    trace.selected.Insert(e);
    obs.push_back({e, phi[e]});
    node = pi.Next(node, phi[e]);
  }
  trace.observed = PartialRealization(std::move(obs));
  return trace;
}

Mask SelectedMask(const ExactModel& model, const Policy& pi, int i) {
  Mask selected = 0;
  int node = pi.root();
  while (node != Policy::kStop) {
    ItemId e = pi.node(node).item;
    if (e >= model.n()) {
      throw Error(ErrorCode::kMalformedPolicy, "policy item out of range");
    }
    if (HasItem(selected, e)) {
      throw Error(ErrorCode::kMalformedPolicy,
                  "item " + std::to_string(e) + " repeats on a policy path");
    }
    selected |= Bit(e);
    node = pi.Next(node, model.state(i, e));
  }
  return selected;
}

double PolicyGain(const ExactModel& model, Mask base, Mask forbidden,
                  const Group& group, const Policy& pi) {
  NeumaierSum sum;
  NeumaierSum mass;
  for (int i : group) {
    Mask selected = SelectedMask(model, pi, i);
    if (selected & forbidden) {
      throw Error(ErrorCode::kPolicyDomainViolation,
                  "policy selects an item that is already observed");
    }
    const double p = model.probability(i);
    sum.Add(p * (model.Value(base | selected, i) - model.Value(base, i)));
    mass.Add(p);
  }
  return sum.Total() / mass.Total();
}

double MarginalPolicy(const Instance& inst, const PartialRealization& psi,
                      const Policy& pi) {
  if (inst.n <= 62) {
    ExactModel model(inst, 0);
    Group group = model.Consistent(psi);
    Mask dom = psi.Domain().Mask();
    return PolicyGain(model, dom, dom, group, pi);
  }
  Prior cond = ConditionalPrior(inst.prior, psi);
  ItemSet dom = psi.Domain();
  NeumaierSum sum;
  for (const WeightedRealization& w : cond.support()) {
    ExecutionTrace trace = Execute(pi, w.states);
    if (trace.selected.Intersects(dom)) {
      throw Error(ErrorCode::kPolicyDomainViolation,
                  "policy selects an item that is already observed");
    }
    sum.Add(w.probability *
            (inst.utility->Evaluate(dom.Union(trace.selected), w.states) -
             inst.utility->Evaluate(dom, w.states)));
  }
  return sum.Total();
}

double ExpectedUtility(const Instance& inst, const Policy& pi) {
  return EmptySetValue(inst) + MarginalPolicy(inst, {}, pi);
}

bool IsRestrictedPolicy(const Instance& inst, const Policy& pi,
                        const IndependenceSystem& sys,
                        const PartialRealization& psi) {
  for (const WeightedRealization& w : inst.prior.support()) {
    if (!IsConsistent(w.states, psi)) continue;
    if (!sys.Contains(Execute(pi, w.states).selected)) return false;
  }
  return true;
}

}  // namespace asgap
