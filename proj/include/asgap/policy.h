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

// Deterministic adaptive policies as decision trees, plus their exact
// evaluation against a prior.

#ifndef ASGAP_POLICY_H_
#define ASGAP_POLICY_H_

#include <map>
#include <string>
#include <vector>

#include "asgap/core.h"
#include "asgap/exact_model.h"

namespace asgap {

class IndependenceSystem;

// Each internal node selects an item and branches on the state observed for
// it. A node may carry a default branch taken for any state without an
// explicit child; path-shaped (non-adaptive) policies use only defaults.
class Policy {
 public:
  static constexpr int kStop = -1;
  static constexpr int kMissing = -2;

  struct Node {
    ItemId item = 0;
    std::map<StateId, int> children;
    int otherwise = kMissing;
  };

  Policy() = default;

  // Selects `items` in order regardless of what is observed.
  static Policy Path(const std::vector<ItemId>& items);
  // Selects `item`, then continues with the subtree keyed by its state.
  // States absent from `branches` are treated as `otherwise`.
  static Policy Select(ItemId item, const std::map<StateId, Policy>& branches,
                       const Policy* otherwise = nullptr);

  int AddNode(ItemId item);
  void SetRoot(int node) { root_ = node; }
  void SetChild(int node, StateId o, int child);
  void SetDefault(int node, int child);

  bool empty() const { return root_ == kStop; }
  int root() const { return root_; }
  int node_count() const { return static_cast<int>(nodes_.size()); }
  const Node& node(int i) const { return nodes_[i]; }

  // Follows the branch for state o; kMalformedPolicy if none exists.
  int Next(int node, StateId o) const;

  // Appends a copy of `other`'s reachable nodes and returns the new index of
  // its root (or kStop).
  int Graft(const Policy& other);

  // Canonical single-line text form; equal trees print equally.
  std::string ToString() const;

  friend bool operator==(const Policy& a, const Policy& b) {
    return a.ToString() == b.ToString();
  }

 private:
  std::vector<Node> nodes_;
  int root_ = kStop;
};

struct ExecutionTrace {
  ItemSet selected;
  PartialRealization observed;
};

// V(pi, phi) and the observations it induces. Throws kMalformedPolicy when a
// branch is missing or an item repeats along the path.
ExecutionTrace Execute(const Policy& pi, const Realization& phi);

// f_avg(pi | psi) by exact enumeration of p(phi | psi).
double MarginalPolicy(const Instance& inst, const PartialRealization& psi,
                      const Policy& pi);

// f_avg(pi) = f(emptyset) + f_avg(pi | emptyset).
double ExpectedUtility(const Instance& inst, const Policy& pi);

// Whether V(pi, phi) is feasible in `sys` for every support realization
// consistent with psi.
bool IsRestrictedPolicy(const Instance& inst, const Policy& pi,
                        const IndependenceSystem& sys,
                        const PartialRealization& psi = {});

// E[f(base u V(pi)) - f(base) | group] over the model. Items inside
// `forbidden` raise kPolicyDomainViolation.
double PolicyGain(const ExactModel& model, Mask base, Mask forbidden,
                  const Group& group, const Policy& pi);

// The item set pi selects on support realization i of the model.
Mask SelectedMask(const ExactModel& model, const Policy& pi, int i);

}  // namespace asgap

#endif  // ASGAP_POLICY_H_
