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

// Core stochastic model: items, states, realizations, priors, partial
// realizations and utility functions.

#ifndef ASGAP_CORE_H_
#define ASGAP_CORE_H_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace asgap {

using ItemId = int;
using StateId = int;

// Absolute tolerance used by every numeric equality and bound check.
inline constexpr double kTolerance = 1e-9;

enum class ErrorCode {
  kInvalidInstance,
  kInvalidParameter,
  kUnobservable,
  kPolicyDomainViolation,
  kInvalidRestriction,
  kCapacity,
  kMalformedPolicy,
  kInvalidWitness,
  kDegenerateGap,
  kParse,
  kDuplicateEdge,
};

const char* ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// A subset of the ground set [0, n), stored as a bitset. Equality and
// ordering ignore trailing zero words.
class ItemSet {
 public:
  ItemSet() = default;
  ItemSet(std::initializer_list<ItemId> items);
  explicit ItemSet(std::span<const ItemId> items);

  static ItemSet FromMask(std::uint64_t mask);
  static ItemSet Range(int n);  // {0, ..., n-1}

  bool Contains(ItemId e) const;
  void Insert(ItemId e);
  void Erase(ItemId e);
  ItemSet With(ItemId e) const;
  ItemSet Without(ItemId e) const;

  int Size() const;
  bool Empty() const { return words_.empty(); }
  std::vector<ItemId> Items() const;
  // Largest member plus one, or 0 when empty.
  int Bound() const;

  bool IsSubsetOf(const ItemSet& other) const;
  bool Intersects(const ItemSet& other) const;
  ItemSet Union(const ItemSet& other) const;
  ItemSet Intersection(const ItemSet& other) const;
  ItemSet Minus(const ItemSet& other) const;

  // Valid only when every member is below 64.
  std::uint64_t Mask() const;

  // Sorted item indices joined by "-"; the empty set is "".
  std::string Key() const;
  static ItemSet FromKey(const std::string& key);

  friend bool operator==(const ItemSet& a, const ItemSet& b) {
    return a.words_ == b.words_;
  }
  friend bool operator<(const ItemSet& a, const ItemSet& b);

  std::size_t Hash() const;

 private:
  void Trim();
  std::vector<std::uint64_t> words_;
};

// A total assignment phi: V -> O, indexed by item.
using Realization = std::vector<StateId>;

struct WeightedRealization {
  Realization states;
  double probability = 0.0;
};

// Explicit finite prior over realizations. Probabilities are strictly
// positive, sum to one within kTolerance and the support is duplicate free.
class Prior {
 public:
  Prior() = default;
  explicit Prior(std::vector<WeightedRealization> support);

  int size() const { return static_cast<int>(support_.size()); }
  int item_count() const { return item_count_; }
  const Realization& realization(int i) const { return support_[i].states; }
  double probability(int i) const { return support_[i].probability; }
  const std::vector<WeightedRealization>& support() const { return support_; }

  // Index of phi in the support, if present.
  std::optional<int> Find(const Realization& phi) const;

 private:
  std::vector<WeightedRealization> support_;
  std::map<Realization, int> index_;
  int item_count_ = 0;
};

struct Observation {
  ItemId item;
  StateId state;
  friend auto operator<=>(const Observation&, const Observation&) = default;
};

// An observed partial assignment psi. Kept sorted by item so equal
// observation sets compare equal regardless of the order they were made in.
class PartialRealization {
 public:
  PartialRealization() = default;
  PartialRealization(std::initializer_list<Observation> observations);
  explicit PartialRealization(std::vector<Observation> observations);

  // psi restricted to `items` taken from a full realization.
  static PartialRealization Restrict(const Realization& phi,
                                     const ItemSet& items);

  const std::vector<Observation>& observations() const { return obs_; }
  int size() const { return static_cast<int>(obs_.size()); }
  bool empty() const { return obs_.empty(); }

  ItemSet Domain() const;
  std::optional<StateId> StateOf(ItemId e) const;
  PartialRealization With(ItemId e, StateId o) const;
  // psi restricted to the items of `items`.
  PartialRealization Restrict(const ItemSet& items) const;

  std::string ToString() const;

  friend bool operator==(const PartialRealization& a,
                         const PartialRealization& b) {
    return a.obs_ == b.obs_;
  }
  friend bool operator<(const PartialRealization& a,
                        const PartialRealization& b) {
    return a.obs_ < b.obs_;
  }

 private:
  std::vector<Observation> obs_;
};

// f: 2^V x O^V -> R. Implementations must be deterministic and immutable.
class UtilityFunction {
 public:
  virtual ~UtilityFunction() = default;
  virtual double Evaluate(const ItemSet& s, const Realization& phi) const = 0;
};

// Utility given as a table: canonical subset key -> value per realization in
// the prior's support order. Missing subsets are an error at evaluation.
class TableUtility : public UtilityFunction {
 public:
  TableUtility(std::vector<Realization> support,
               std::map<ItemSet, std::vector<double>> values);
  double Evaluate(const ItemSet& s, const Realization& phi) const override;

  const std::map<ItemSet, std::vector<double>>& values() const {
    return values_;
  }

 private:
  std::map<Realization, int> index_;
  std::map<ItemSet, std::vector<double>> values_;
};

class IndependenceSystem;

// The bundle (f, p, V, I) every solver, checker and the CLI consume.
struct Instance {
  Instance(int n, int state_count, Prior prior,
           std::shared_ptr<const UtilityFunction> utility,
           std::shared_ptr<const IndependenceSystem> system);

  int n;
  int state_count;
  Prior prior;
  std::shared_ptr<const UtilityFunction> utility;
  std::shared_ptr<const IndependenceSystem> system;
};

bool IsConsistent(const Realization& phi, const PartialRealization& psi);
bool IsSubrealization(const PartialRealization& a, const PartialRealization& b);

// p(phi | psi). Throws kUnobservable when no support realization agrees.
Prior ConditionalPrior(const Prior& prior, const PartialRealization& psi);

// f(emptyset) = E[f(emptyset, Phi)].
double EmptySetValue(const Instance& inst);

// E[f(dom(psi) + e, Phi) - f(dom(psi), Phi) | Phi ~ psi].
double MarginalItem(const Instance& inst, const PartialRealization& psi,
                    ItemId e);

}  // namespace asgap

template <>
struct std::hash<asgap::ItemSet> {
  std::size_t operator()(const asgap::ItemSet& s) const { return s.Hash(); }
};

#endif  // ASGAP_CORE_H_
