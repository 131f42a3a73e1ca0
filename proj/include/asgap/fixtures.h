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


// Seeded random instances and systems for property tests and the
// verification suite.

#ifndef ASGAP_FIXTURES_H_
#define ASGAP_FIXTURES_H_

#include <cstdint>
#include <random>
#include <vector>

#include "asgap/core.h"
#include "asgap/independence.h"

namespace asgap {

// Product prior with the given per-item state distributions. Every
// realization of positive probability is listed.
Prior ProductPrior(const std::vector<std::vector<double>>& marginals);

// Independent item states with utility
//   f(S, phi) = c + g(sum_{e in S} w(e, phi(e))) - lambda |S|
// where w >= 0, g is concave and nondecreasing, c may be negative and
// lambda >= 0. Such utilities are adaptive submodular (and so policywise
// submodular) but need not be monotone.
struct IndependentFixtureOptions {
  int min_items = 1;
  int max_items = 4;
  int max_states = 3;
  bool allow_negative = true;  // random offset c and cost lambda
};
Instance RandomIndependentInstance(std::mt19937_64& rng,
                                   const IndependentFixtureOptions& options,
                                   SystemPtr system = nullptr);

// A correlated prior on a random support and a utility table with arbitrary
// values, i.e. no structural guarantees at all.
Instance RandomCorrelatedInstance(std::mt19937_64& rng, int n, int states,
                                  SystemPtr system = nullptr);

// One of cardinality, knapsack, partition or explicit, chosen at random.
SystemPtr RandomSystem(std::mt19937_64& rng, int n);

// Every system kind on n items, for exhaustive axiom checks.
std::vector<SystemPtr> SystemZoo(std::mt19937_64& rng, int n);

}  // namespace asgap

#endif  // ASGAP_FIXTURES_H_
