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

// Exhaustive membership checks for the three diminishing-returns classes:
// adaptive submodular, policy-adaptive submodular and policywise submodular.
//
// All three quantify over pairs psi_a subset-of psi_b of partial realizations
// with positive prior mass. Pairs are visited in canonical order: psi_a by
// domain size, then domain, then states; psi_b likewise among the
// observable extensions of psi_a. The first violation found is reported.

#ifndef ASGAP_CHECKERS_H_
#define ASGAP_CHECKERS_H_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "asgap/core.h"
#include "asgap/exact_model.h"
#include "asgap/policy.h"

namespace asgap {

struct Witness {
  PartialRealization psi_a;
  PartialRealization psi_b;
  std::optional<ItemId> item;
  // The policy evaluated on top of psi_a (and psi_b, unless policy_b is set).
  std::optional<Policy> policy;
  std::optional<Policy> policy_b;
  std::optional<ItemSet> restriction;  // R, policywise checks only
  double lhs = 0.0;  // value on top of psi_a
  double rhs = 0.0;  // value on top of psi_b
};

struct CheckReport {
  bool holds = true;
  std::optional<Witness> witness;
  std::size_t comparisons = 0;
};

struct CheckOptions {
  // Cap on the number of observable partial realizations enumerated.
  std::size_t max_partial_realizations = 200'000;
  // Cap on memoized entries per inner optimization.
  std::size_t max_memo_entries = 1'000'000;
};

// Observable partial realizations in canonical order.
std::vector<PartialRealization> ObservablePartialRealizations(
    const ExactModel& model, std::size_t cap = 200'000);

CheckReport CheckAdaptive(const Instance& inst,
                          const CheckOptions& options = {});

// Minimizes f_avg(pi | psi_a) - f_avg(pi | psi_b) over all deterministic
// trees on V \ dom(psi_b) for every pair; the minimizer is the witness.
CheckReport CheckPolicyAdaptive(const Instance& inst,
                                const CheckOptions& options = {});

// The same minimization for one given pair. holds reflects that pair only.
CheckReport CheckPolicyAdaptivePair(const Instance& inst,
                                    const PartialRealization& psi_a,
                                    const PartialRealization& psi_b,
                                    const CheckOptions& options = {});

// Evaluates a supplied witness without any enumeration.
CheckReport RefutePolicyAdaptiveWithWitness(const Instance& inst,
                                            const PartialRealization& psi_a,
                                            const PartialRealization& psi_b,
                                            const Policy& pi);

CheckReport CheckPolicywise(const Instance& inst,
                            const CheckOptions& options = {});

// The instance seen on top of psi: utility f(S u dom(psi), phi) -
// f(dom(psi), phi), prior p(phi | psi), system I^{V \ dom(psi)}_{dom(psi)}.
Instance ConditionInstance(const Instance& inst, const PartialRealization& psi);

std::string DescribeReport(const CheckReport& report);

}  // namespace asgap

#endif  // ASGAP_CHECKERS_H_
