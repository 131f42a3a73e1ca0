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


#ifndef ASGAP_VERIFY_H_
#define ASGAP_VERIFY_H_

#include <cstdint>
#include <string>
#include <vector>

namespace asgap {

struct VerifyCheck {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;
  bool passed() const;
  std::string ToText() const;
};

enum class VerifyScope { kLemmas, kTheorem1, kCounterexample, kAll };

VerifyScope VerifyScopeFromName(const std::string& name);

struct VerifyOptions {
  std::uint64_t seed = 2026;
  int theorem_instances = 100;
  int conditioning_fixtures = 20;
  int implication_fixtures = 150;
  int max_system_items = 6;
};

// Restricted systems stay inside the base system and are downward closed;
// shrinking the selected set only adds feasible sets; selecting an item
// lowers the rank. Exhaustive over the system zoo up to max_system_items.
std::vector<VerifyCheck> VerifyRestrictionProperties(const VerifyOptions& o);

// Conditioning a policywise submodular instance on any feasible observation
// keeps it policywise submodular.
VerifyCheck VerifyConditioning(const VerifyOptions& o);

// Policy-adaptive submodularity implies adaptive and policywise
// submodularity on every fixture where it holds.
VerifyCheck VerifyImplicationChain(const VerifyOptions& o);

// The single-item instance has gap exactly 1 / r and meets the sampled-
// optimum bound with equality; random instances meet it at r in
// {0.25, 0.5, 0.75}.
std::vector<VerifyCheck> VerifySampledOptimumBound(const VerifyOptions& o);

// The cascade counterexample: the policy's gain is 5 on top of the larger
// observation and 2.5 on top of none, the policy-adaptive check fails,
// and the adaptive and policywise checks pass.
std::vector<VerifyCheck> VerifyCounterexample();

VerifyReport VerifySuite(VerifyScope scope, const VerifyOptions& o = {});

}  // namespace asgap

#endif  // ASGAP_VERIFY_H_
