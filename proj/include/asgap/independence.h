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

// Independence systems (downward-closed families containing the empty set)
// and the restriction operator I^R_S = {A : A u S in I, A subset of R}.

#ifndef ASGAP_INDEPENDENCE_H_
#define ASGAP_INDEPENDENCE_H_

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "asgap/core.h"

namespace asgap {

// Ground sets above this size are refused by exhaustive rank and enumeration.
inline constexpr int kDefaultEnumerationCap = 20;

class IndependenceSystem {
 public:
  explicit IndependenceSystem(int n) : n_(n) {}
  virtual ~IndependenceSystem() = default;

  int ground_size() const { return n_; }
  virtual bool Contains(const ItemSet& a) const = 0;
  // Size of the largest feasible set. The default is exhaustive and refuses
  // ground sets larger than `cap`.
  virtual int Rank(int cap = kDefaultEnumerationCap) const;
  virtual std::string kind() const = 0;

 protected:
  int ExhaustiveRank(int cap) const;

 private:
  int n_;
};

using SystemPtr = std::shared_ptr<const IndependenceSystem>;

class CardinalitySystem : public IndependenceSystem {
 public:
  CardinalitySystem(int n, int k);
  bool Contains(const ItemSet& a) const override {
    return a.Size() <= k_ && a.Bound() <= ground_size();
  }
  int Rank(int cap = kDefaultEnumerationCap) const override;
  std::string kind() const override { return "cardinality"; }
  int k() const { return k_; }

 private:
  int k_;
};

class KnapsackSystem : public IndependenceSystem {
 public:
  KnapsackSystem(std::vector<double> costs, double budget);
  bool Contains(const ItemSet& a) const override;
  int Rank(int cap = kDefaultEnumerationCap) const override;
  std::string kind() const override { return "knapsack"; }
  const std::vector<double>& costs() const { return costs_; }
  double budget() const { return budget_; }

 private:
  std::vector<double> costs_;
  double budget_;
};

class PartitionMatroid : public IndependenceSystem {
 public:
  PartitionMatroid(int n, std::vector<std::vector<ItemId>> blocks,
                   std::vector<int> limits);
  bool Contains(const ItemSet& a) const override;
  int Rank(int cap = kDefaultEnumerationCap) const override;
  std::string kind() const override { return "partition"; }
  const std::vector<std::vector<ItemId>>& blocks() const { return blocks_; }
  const std::vector<int>& limits() const { return limits_; }

 private:
  std::vector<std::vector<ItemId>> blocks_;
  std::vector<int> limits_;
  std::vector<int> block_of_;
};

// A listed family of feasible sets.
class ExplicitSystem : public IndependenceSystem {
 public:
  // `sets` must contain the empty set and be downward-closed.
  ExplicitSystem(int n, std::vector<ItemSet> sets);
  // The downward closure of `generators` (plus the empty set).
  static std::shared_ptr<ExplicitSystem> GeneratedBy(
      int n, const std::vector<ItemSet>& generators);

  bool Contains(const ItemSet& a) const override {
    return family_.count(a) > 0;
  }
  int Rank(int cap = kDefaultEnumerationCap) const override;
  std::string kind() const override { return "explicit"; }
  const std::set<ItemSet>& family() const { return family_; }

 private:
  std::set<ItemSet> family_;
};

// I^R_S over a base system.
class RestrictedSystem : public IndependenceSystem {
 public:
  // Requires S and R disjoint and S feasible in base.
  RestrictedSystem(SystemPtr base, ItemSet s, ItemSet r);

  bool Contains(const ItemSet& a) const override {
    return a.IsSubsetOf(r_) && base_->Contains(a.Union(s_));
  }
  std::string kind() const override { return "restricted"; }

  const SystemPtr& base() const { return base_; }
  const ItemSet& selected() const { return s_; }
  const ItemSet& allowed() const { return r_; }

 private:
  SystemPtr base_;
  ItemSet s_;
  ItemSet r_;
};

SystemPtr MakeCardinality(int n, int k);
SystemPtr MakeKnapsack(std::vector<double> costs, double budget);
SystemPtr MakePartition(int n, std::vector<std::vector<ItemId>> blocks,
                        std::vector<int> limits);
std::shared_ptr<const RestrictedSystem> Restrict(SystemPtr base, ItemSet s,
                                                 ItemSet r);

// Every feasible subset of the ground set, in increasing mask order.
std::vector<ItemSet> FeasibleSets(const IndependenceSystem& sys,
                                  int cap = kDefaultEnumerationCap);

// Exhaustively checks that the empty set is feasible and the family is
// downward closed.
bool IsDownwardClosed(const IndependenceSystem& sys,
                      int cap = kDefaultEnumerationCap);

}  // namespace asgap

#endif  // ASGAP_INDEPENDENCE_H_
