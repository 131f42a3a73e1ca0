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

#include "asgap/core.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include "asgap/exact_model.h"
#include "asgap/independence.h"

namespace asgap {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidInstance: return "invalid-instance";
    case ErrorCode::kInvalidParameter: return "invalid-parameter";
    case ErrorCode::kUnobservable: return "unobservable-partial-realization";
    case ErrorCode::kPolicyDomainViolation: return "policy-domain-violation";
    case ErrorCode::kInvalidRestriction: return "invalid-restriction";
    case ErrorCode::kCapacity: return "capacity";
    case ErrorCode::kMalformedPolicy: return "malformed-policy";
    case ErrorCode::kInvalidWitness: return "invalid-witness";
    case ErrorCode::kDegenerateGap: return "degenerate-gap";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kDuplicateEdge: return "duplicate-edge";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// ItemSet

ItemSet::ItemSet(std::initializer_list<ItemId> items) {
  for (ItemId e : items) Insert(e);
}

ItemSet::ItemSet(std::span<const ItemId> items) {
  for (ItemId e : items) Insert(e);
}

ItemSet ItemSet::FromMask(std::uint64_t mask) {
  ItemSet s;
  if (mask != 0) s.words_.push_back(mask);
  return s;
}

ItemSet ItemSet::Range(int n) {
  ItemSet s;
  for (int e = 0; e < n; ++e) s.Insert(e);
  return s;
}

bool ItemSet::Contains(ItemId e) const {
  if (e < 0) return false;
  std::size_t w = static_cast<std::size_t>(e) / 64;
  if (w >= words_.size()) return false;
  return (words_[w] >> (e % 64)) & 1u;
}

void ItemSet::Insert(ItemId e) {
  if (e < 0) throw Error(ErrorCode::kInvalidParameter, "negative item id");
  std::size_t w = static_cast<std::size_t>(e) / 64;
  if (w >= words_.size()) words_.resize(w + 1, 0);
  words_[w] |= std::uint64_t{1} << (e % 64);
}

void ItemSet::Erase(ItemId e) {
  if (!Contains(e)) return;
  words_[e / 64] &= ~(std::uint64_t{1} << (e % 64));
  Trim();
}

ItemSet ItemSet::With(ItemId e) const {
  ItemSet s = *this;
  s.Insert(e);
  return s;
}

ItemSet ItemSet::Without(ItemId e) const {
  ItemSet s = *this;
  s.Erase(e);
  return s;
}

int ItemSet::Size() const {
  int total = 0;
  for (std::uint64_t w : words_) total += std::popcount(w);
  return total;
}

std::vector<ItemId> ItemSet::Items() const {
  std::vector<ItemId> out;
  out.reserve(Size());
  for (std::size_t w = 0; w < words_.size(); ++w) {
    std::uint64_t bits = words_[w];
    while (bits != 0) {
      int b = std::countr_zero(bits);
      out.push_back(static_cast<ItemId>(w * 64 + b));
      bits &= bits - 1;
    }
  }
  return out;
}

int ItemSet::Bound() const {
  if (words_.empty()) return 0;
  return static_cast<int>((words_.size() - 1) * 64) + 64 -
         std::countl_zero(words_.back());
}

bool ItemSet::IsSubsetOf(const ItemSet& other) const {
  if (words_.size() > other.words_.size()) return false;
  for (std::size_t w = 0; w < words_.size(); ++w) {
    if (words_[w] & ~other.words_[w]) return false;
  }
  return true;
}

bool ItemSet::Intersects(const ItemSet& other) const {
  std::size_t common = std::min(words_.size(), other.words_.size());
  for (std::size_t w = 0; w < common; ++w) {
    if (words_[w] & other.words_[w]) return true;
  }
  return false;
}

ItemSet ItemSet::Union(const ItemSet& other) const {
  ItemSet s;
  s.words_.resize(std::max(words_.size(), other.words_.size()), 0);
  for (std::size_t w = 0; w < words_.size(); ++w) s.words_[w] |= words_[w];
  for (std::size_t w = 0; w < other.words_.size(); ++w) {
    s.words_[w] |= other.words_[w];
  }
  return s;
}

ItemSet ItemSet::Intersection(const ItemSet& other) const {
  ItemSet s;
  s.words_.resize(std::min(words_.size(), other.words_.size()), 0);
  for (std::size_t w = 0; w < s.words_.size(); ++w) {
    s.words_[w] = words_[w] & other.words_[w];
  }
  s.Trim();
  return s;
}

ItemSet ItemSet::Minus(const ItemSet& other) const {
  ItemSet s = *this;
  std::size_t common = std::min(words_.size(), other.words_.size());
  for (std::size_t w = 0; w < common; ++w) s.words_[w] &= ~other.words_[w];
  s.Trim();
  return s;
}

std::uint64_t ItemSet::Mask() const {
  if (words_.size() > 1) {
    throw Error(ErrorCode::kCapacity, "item set does not fit in 64 bits");
  }
  return words_.empty() ? 0 : words_[0];
}

std::string ItemSet::Key() const {
  std::string key;
  for (ItemId e : Items()) {
    if (!key.empty()) key += '-';
    key += std::to_string(e);
  }
  return key;
}

ItemSet ItemSet::FromKey(const std::string& key) {
  ItemSet s;
  if (key.empty()) return s;
  std::stringstream in(key);
  std::string part;
  while (std::getline(in, part, '-')) {
    if (part.empty() ||
        !std::all_of(part.begin(), part.end(), [](char c) {
          return c >= '0' && c <= '9';
        })) {
      throw Error(ErrorCode::kParse, "bad subset key '" + key + "'");
    }
    s.Insert(std::stoi(part));
  }
  return s;
}

bool operator<(const ItemSet& a, const ItemSet& b) {
  // Lexicographic on sorted members.
  return a.Items() < b.Items();
}

std::size_t ItemSet::Hash() const {
  std::size_t h = 0x9e3779b97f4a7c15ull;
  for (std::uint64_t w : words_) {
    h ^= w + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  return h;
}

void ItemSet::Trim() {
  while (!words_.empty() && words_.back() == 0) words_.pop_back();
}

// ---------------------------------------------------------------------------
// Prior

Prior::Prior(std::vector<WeightedRealization> support)
    : support_(std::move(support)) {
  if (support_.empty()) {
    throw Error(ErrorCode::kInvalidInstance, "prior has empty support");
  }
  item_count_ = static_cast<int>(support_[0].states.size());
  double total = 0.0;
  for (int i = 0; i < size(); ++i) {
    const WeightedRealization& w = support_[i];
    if (static_cast<int>(w.states.size()) != item_count_) {
      throw Error(ErrorCode::kInvalidInstance,
                  "realizations in the prior differ in length");
    }
    if (!(w.probability > 0.0) || w.probability > 1.0 + kTolerance) {
      throw Error(ErrorCode::kInvalidInstance,
                  "prior probabilities must lie in (0, 1]");
    }
    if (!index_.emplace(w.states, i).second) {
      throw Error(ErrorCode::kInvalidInstance,
                  "duplicate realization in prior support");
    }
    total += w.probability;
  }
  if (std::abs(total - 1.0) > kTolerance) {
    throw Error(ErrorCode::kInvalidInstance,
                "prior probabilities sum to " + std::to_string(total));
  }
}

std::optional<int> Prior::Find(const Realization& phi) const {
  auto it = index_.find(phi);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

// ---------------------------------------------------------------------------
// PartialRealization

PartialRealization::PartialRealization(
    std::initializer_list<Observation> observations)
    : PartialRealization(std::vector<Observation>(observations)) {}

PartialRealization::PartialRealization(std::vector<Observation> observations)
    : obs_(std::move(observations)) {
  std::sort(obs_.begin(), obs_.end());
  for (std::size_t i = 0; i < obs_.size(); ++i) {
    if (obs_[i].item < 0 || obs_[i].state < 0) {
      throw Error(ErrorCode::kInvalidParameter, "negative id in observation");
    }
    if (i > 0 && obs_[i].item == obs_[i - 1].item) {
      throw Error(ErrorCode::kInvalidParameter,
                  "item " + std::to_string(obs_[i].item) +
                      " observed twice");
    }
  }
}

PartialRealization PartialRealization::Restrict(const Realization& phi,
                                                const ItemSet& items) {
  PartialRealization psi;
  for (ItemId e : items.Items()) {
    if (e >= static_cast<int>(phi.size())) {
      throw Error(ErrorCode::kInvalidInstance, "item outside realization");
    }
    psi.obs_.push_back({e, phi[e]});
  }
  return psi;
}

ItemSet PartialRealization::Domain() const {
  ItemSet s;
  for (const Observation& o : obs_) s.Insert(o.item);
  return s;
}

std::optional<StateId> PartialRealization::StateOf(ItemId e) const {
  auto it = std::lower_bound(obs_.begin(), obs_.end(), Observation{e, -1});
  if (it != obs_.end() && it->item == e) return it->state;
  return std::nullopt;
}

PartialRealization PartialRealization::With(ItemId e, StateId o) const {
  std::vector<Observation> obs = obs_;
  obs.push_back({e, o});
  return PartialRealization(std::move(obs));
}

PartialRealization PartialRealization::Restrict(const ItemSet& items) const {
  PartialRealization psi;
  for (const Observation& o : obs_) {
    if (items.Contains(o.item)) psi.obs_.push_back(o);
  }
  return psi;
}

std::string PartialRealization::ToString() const {
  std::string out = "{";
  for (std::size_t i = 0; i < obs_.size(); ++i) {
    if (i > 0) out += ", ";
    out += "(" + std::to_string(obs_[i].item) + "," +
           std::to_string(obs_[i].state) + ")";
  }
  return out + "}";
}

// ---------------------------------------------------------------------------
// TableUtility

TableUtility::TableUtility(std::vector<Realization> support,
                           std::map<ItemSet, std::vector<double>> values)
    : values_(std::move(values)) {
  for (std::size_t i = 0; i < support.size(); ++i) {
    index_.emplace(support[i], static_cast<int>(i));
  }
  for (const auto& [set, row] : values_) {
    if (row.size() != support.size()) {
      throw Error(ErrorCode::kInvalidInstance,
                  "utility row for '" + set.Key() + "' has " +
                      std::to_string(row.size()) + " values, expected " +
                      std::to_string(support.size()));
    }
  }
}

double TableUtility::Evaluate(const ItemSet& s, const Realization& phi) const {
  auto row = values_.find(s);
  if (row == values_.end()) {
    throw Error(ErrorCode::kInvalidInstance,
                "utility table has no entry for subset '" + s.Key() + "'");
  }
  auto idx = index_.find(phi);
  if (idx == index_.end()) {
    throw Error(ErrorCode::kInvalidInstance,
                "utility table evaluated outside the prior support");
  }
  return row->second[idx->second];
}

// ---------------------------------------------------------------------------
// Instance

Instance::Instance(int n_in, int state_count_in, Prior prior_in,
                   std::shared_ptr<const UtilityFunction> utility_in,
                   std::shared_ptr<const IndependenceSystem> system_in)
    : n(n_in),
      state_count(state_count_in),
      prior(std::move(prior_in)),
      utility(std::move(utility_in)),
      system(std::move(system_in)) {
  if (n < 0 || state_count < 1) {
    throw Error(ErrorCode::kInvalidInstance, "bad instance dimensions");
  }
  if (!utility || !system) {
    throw Error(ErrorCode::kInvalidInstance, "instance missing a component");
  }
  if (prior.item_count() != n) {
    throw Error(ErrorCode::kInvalidInstance,
                "prior realizations have length " +
                    std::to_string(prior.item_count()) + ", expected " +
                    std::to_string(n));
  }
  for (const WeightedRealization& w : prior.support()) {
    for (StateId o : w.states) {
      if (o < 0 || o >= state_count) {
        throw Error(ErrorCode::kInvalidInstance, "state id out of range");
      }
    }
  }
  if (system->ground_size() != n) {
    throw Error(ErrorCode::kInvalidInstance,
                "independence system ground size disagrees with n");
  }
}

// ---------------------------------------------------------------------------
// Operations

bool IsConsistent(const Realization& phi, const PartialRealization& psi) {
  for (const Observation& o : psi.observations()) {
    if (o.item >= static_cast<int>(phi.size())) {
      throw Error(ErrorCode::kInvalidInstance,
                  "item " + std::to_string(o.item) + " out of range");
    }
    if (phi[o.item] != o.state) return false;
  }
  return true;
}

bool IsSubrealization(const PartialRealization& a,
                      const PartialRealization& b) {
  for (const Observation& o : a.observations()) {
    std::optional<StateId> s = b.StateOf(o.item);
    if (!s || *s != o.state) return false;
  }
  return true;
}

Prior ConditionalPrior(const Prior& prior, const PartialRealization& psi) {
  std::vector<WeightedRealization> kept;
  double mass = 0.0;
  for (const WeightedRealization& w : prior.support()) {
    if (IsConsistent(w.states, psi)) {
      kept.push_back(w);
      mass += w.probability;
    }
  }
  if (kept.empty()) {
    throw Error(ErrorCode::kUnobservable,
                "no realization is consistent with " + psi.ToString());
  }
  for (WeightedRealization& w : kept) w.probability /= mass;
  return Prior(std::move(kept));
}

double EmptySetValue(const Instance& inst) {
  ExactModel model(inst, 0);
  return model.EmptySetValue();
}

double MarginalItem(const Instance& inst, const PartialRealization& psi,
                    ItemId e) {
  if (e < 0 || e >= inst.n) {
    throw Error(ErrorCode::kInvalidInstance, "item out of range");
  }
  Prior cond = ConditionalPrior(inst.prior, psi);
  ItemSet base = psi.Domain();
  ItemSet with = base.With(e);
  NeumaierSum sum;
  for (const WeightedRealization& w : cond.support()) {
    sum.Add(w.probability * (inst.utility->Evaluate(with, w.states) -
                             inst.utility->Evaluate(base, w.states)));
  }
  return sum.Total();
}

}  // namespace asgap
