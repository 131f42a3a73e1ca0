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

#include "asgap/independence.h"

#include <algorithm>
#include <cstdint>

namespace asgap {

namespace {

void CheckEnumerable(int n, int cap) {
  if (n > cap || n > 62) {
    throw Error(ErrorCode::kCapacity,
                "ground set of " + std::to_string(n) +
                    " items exceeds the enumeration cap of " +
                    std::to_string(cap));
  }
}

}  // namespace

int IndependenceSystem::Rank(int cap) const { return ExhaustiveRank(cap); }

int IndependenceSystem::ExhaustiveRank(int cap) const {
  CheckEnumerable(ground_size(), cap);
  int best = 0;
  const std::uint64_t subsets = std::uint64_t{1} << ground_size();
  for (std::uint64_t m = 0; m < subsets; ++m) {
    ItemSet a = ItemSet::FromMask(m);
    int size = a.Size();
    if (size > best && Contains(a)) best = size;
  }
  return best;
}

// ---------------------------------------------------------------------------

CardinalitySystem::CardinalitySystem(int n, int k)
    : IndependenceSystem(n), k_(k) {
  if (n < 0 || k < 0) {
    throw Error(ErrorCode::kInvalidParameter,
                "cardinality system needs n >= 0 and k >= 0");
  }
}

int CardinalitySystem::Rank(int) const { return std::min(k_, ground_size()); }

KnapsackSystem::KnapsackSystem(std::vector<double> costs, double budget)
    : IndependenceSystem(static_cast<int>(costs.size())),
      costs_(std::move(costs)),
      budget_(budget) {
  for (double c : costs_) {
    if (!(c > 0.0)) {
      throw Error(ErrorCode::kInvalidParameter, "knapsack costs must be > 0");
    }
  }
  if (!(budget_ >= 0.0)) {
    throw Error(ErrorCode::kInvalidParameter, "knapsack budget must be >= 0");
  }
}

bool KnapsackSystem::Contains(const ItemSet& a) const {
  double total = 0.0;
  for (ItemId e : a.Items()) {
    if (e >= ground_size()) return false;
    total += costs_[e];
  }
  return total <= budget_;
}

int KnapsackSystem::Rank(int) const {
  std::vector<double> sorted = costs_;
  std::sort(sorted.begin(), sorted.end());
  double total = 0.0;
  int count = 0;
  for (double c : sorted) {
    if (total + c > budget_) break;
    total += c;
    ++count;
  }
  return count;
}

PartitionMatroid::PartitionMatroid(int n,
                                   std::vector<std::vector<ItemId>> blocks,
                                   std::vector<int> limits)
    : IndependenceSystem(n),
      blocks_(std::move(blocks)),
      limits_(std::move(limits)),
      block_of_(n, -1) {
  if (blocks_.size() != limits_.size()) {
    throw Error(ErrorCode::kInvalidParameter,
                "partition needs one limit per block");
  }
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    if (limits_[b] < 0) {
      throw Error(ErrorCode::kInvalidParameter, "negative block limit");
    }
    for (ItemId e : blocks_[b]) {
      if (e < 0 || e >= n || block_of_[e] != -1) {
        throw Error(ErrorCode::kInvalidParameter,
                    "blocks must partition the ground set");
      }
      block_of_[e] = static_cast<int>(b);
    }
  }
  if (std::find(block_of_.begin(), block_of_.end(), -1) != block_of_.end()) {
    throw Error(ErrorCode::kInvalidParameter,
                "items missing from the partition");
  }
}

bool PartitionMatroid::Contains(const ItemSet& a) const {
  std::vector<int> used(blocks_.size(), 0);
  for (ItemId e : a.Items()) {
    if (e >= ground_size()) return false;
    int b = block_of_[e];
    if (++used[b] > limits_[b]) return false;
  }
  return true;
}

int PartitionMatroid::Rank(int) const {
  int total = 0;
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    total += std::min<int>(limits_[b], static_cast<int>(blocks_[b].size()));
  }
  return total;
}

ExplicitSystem::ExplicitSystem(int n, std::vector<ItemSet> sets)
    : IndependenceSystem(n), family_(sets.begin(), sets.end()) {
  if (!family_.count(ItemSet{})) {
    throw Error(ErrorCode::kInvalidParameter,
                "explicit system must contain the empty set");
  }
  for (const ItemSet& a : family_) {
    if (a.Bound() > n) {
      throw Error(ErrorCode::kInvalidParameter,
                  "explicit set outside the ground set");
    }
    for (ItemId e : a.Items()) {
      if (!family_.count(a.Without(e))) {
        throw Error(ErrorCode::kInvalidParameter,
                    "explicit system is not downward closed at {" + a.Key() +
                        "}");
      }
    }
  }
}

std::shared_ptr<ExplicitSystem> ExplicitSystem::GeneratedBy(
    int n, const std::vector<ItemSet>& generators) {
  std::set<ItemSet> closed{ItemSet{}};
  std::vector<ItemSet> stack(generators.begin(), generators.end());
  while (!stack.empty()) {
    ItemSet a = stack.back();
    stack.pop_back();
    if (!closed.insert(a).second) continue;
    for (ItemId e : a.Items()) stack.push_back(a.Without(e));
  }
  return std::make_shared<ExplicitSystem>(
      n, std::vector<ItemSet>(closed.begin(), closed.end()));
}

int ExplicitSystem::Rank(int cap) const {
  CheckEnumerable(ground_size(), cap);
  int best = 0;
  for (const ItemSet& a : family_) best = std::max(best, a.Size());
  return best;
}

RestrictedSystem::RestrictedSystem(SystemPtr base, ItemSet s, ItemSet r)
    : IndependenceSystem(base ? base->ground_size() : 0),
      base_(std::move(base)),
      s_(std::move(s)),
      r_(std::move(r)) {
  if (!base_) {
    throw Error(ErrorCode::kInvalidRestriction, "restriction of null system");
  }
  if (s_.Intersects(r_)) {
    throw Error(ErrorCode::kInvalidRestriction,
                "S and R must be disjoint in a restriction");
  }
  if (!base_->Contains(s_)) {
    throw Error(ErrorCode::kInvalidRestriction,
                "S = {" + s_.Key() + "} is infeasible in the base system");
  }
  if (r_.Bound() > ground_size()) {
    throw Error(ErrorCode::kInvalidRestriction, "R outside the ground set");
  }
}

SystemPtr MakeCardinality(int n, int k) {
  return std::make_shared<CardinalitySystem>(n, k);
}

SystemPtr MakeKnapsack(std::vector<double> costs, double budget) {
  return std::make_shared<KnapsackSystem>(std::move(costs), budget);
}

SystemPtr MakePartition(int n, std::vector<std::vector<ItemId>> blocks,
                        std::vector<int> limits) {
  return std::make_shared<PartitionMatroid>(n, std::move(blocks),
                                            std::move(limits));
}

std::shared_ptr<const RestrictedSystem> Restrict(SystemPtr base, ItemSet s,
                                                 ItemSet r) {
  return std::make_shared<RestrictedSystem>(std::move(base), std::move(s),
                                            std::move(r));
}

std::vector<ItemSet> FeasibleSets(const IndependenceSystem& sys, int cap) {
  CheckEnumerable(sys.ground_size(), cap);
  std::vector<ItemSet> out;
  const std::uint64_t subsets = std::uint64_t{1} << sys.ground_size();
  for (std::uint64_t m = 0; m < subsets; ++m) {
    ItemSet a = ItemSet::FromMask(m);
    if (sys.Contains(a)) out.push_back(a);
  }
  return out;
}

bool IsDownwardClosed(const IndependenceSystem& sys, int cap) {
  CheckEnumerable(sys.ground_size(), cap);
  if (!sys.Contains(ItemSet{})) return false;
  const std::uint64_t subsets = std::uint64_t{1} << sys.ground_size();
  for (std::uint64_t m = 0; m < subsets; ++m) {
    if (!sys.Contains(ItemSet::FromMask(m))) continue;
    for (std::uint64_t rest = m; rest != 0; rest &= rest - 1) {
      std::uint64_t smaller = m & ~(rest & (~rest + 1));
      if (!sys.Contains(ItemSet::FromMask(smaller))) return false;
    }
  }
  return true;
}

}  // namespace asgap
