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


// Random ground subsets T, the expected optimum E_T[f_avg(pi*_T)] over them
// and the resulting sampling gap, plus the bounds relating the two.

#ifndef ASGAP_SAMPLING_GAP_H_
#define ASGAP_SAMPLING_GAP_H_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "asgap/core.h"
#include "asgap/independence.h"
#include "asgap/policy.h"

namespace asgap {

class SampleDistribution {
 public:
  // Every item is kept independently with probability `rate`, or with its
  // override, which may not fall below `rate`.
  static SampleDistribution Bernoulli(int n, double rate,
                                      std::map<ItemId, double> overrides = {});
  // A listed distribution over subsets. The declared rate defaults to the
  // smallest per-item inclusion probability and may not exceed it.
  static SampleDistribution Explicit(
      int n, std::vector<std::pair<ItemSet, double>> sets,
      std::optional<double> declared_rate = std::nullopt);

  int n() const { return n_; }
  double rate() const { return rate_; }
  double InclusionProbability(ItemId e) const;

  // Every subset with positive probability, in increasing mask order for
  // Bernoulli and listing order for Explicit.
  std::vector<std::pair<ItemSet, double>> Enumerate(
      int cap = kDefaultEnumerationCap) const;
  ItemSet Sample(std::mt19937_64& rng) const;

 private:
  SampleDistribution() = default;

  int n_ = 0;
  double rate_ = 0.0;
  bool is_explicit_ = false;
  std::vector<double> keep_;  // Bernoulli inclusion probability per item
  std::vector<std::pair<ItemSet, double>> sets_;
  std::vector<double> cumulative_;
};

struct EvaluationMode {
  bool exact = true;
  int trials = 10'000;  // Monte-Carlo only
  std::uint64_t seed = 0;

  static EvaluationMode Exact() { return {}; }
  static EvaluationMode MonteCarlo(int trials, std::uint64_t seed) {
    return {false, trials, seed};
  }
};

struct SampledValue {
  double mean = 0.0;
  double std_error = 0.0;  // zero in exact mode
  bool exact = true;
};

// Builds the policy run on ground subset T. `restricted` is I^T_empty.
using PolicyBuilder = std::function<Policy(
    const Instance& inst, const IndependenceSystem& restricted,
    const ItemSet& ground)>;

// f_avg(pi*_V): f(empty) plus the optimal restricted gain over I.
double OptimalValue(const Instance& inst);

// E_T[f_avg(pi*_T)] with T drawn from `dist`.
SampledValue ExpectedSampledOpt(const Instance& inst,
                                const SampleDistribution& dist,
                                const EvaluationMode& mode = {});

// E_T[f_avg(pi_T)] for the policies produced by `builder`. Every built
// policy must be I^T_empty-restricted, otherwise kPolicyDomainViolation.
SampledValue ExpectedSampledValue(const Instance& inst,
                                  const SampleDistribution& dist,
                                  const PolicyBuilder& builder,
                                  const EvaluationMode& mode = {});

struct GapReport {
  double rate = 0.0;
  double full_value = 0.0;
  double expected_sampled_value = 0.0;
  double std_error = 0.0;
  // Undefined (and `degenerate` set) when the expected sampled value is not
  // positive.
  std::optional<double> gap;
  bool degenerate = false;
  double bound_rhs = 0.0;  // (1 - r) f(empty) + r f_avg(pi*_V)
  double empty_value = 0.0;
  bool exact = true;
};

GapReport SamplingGap(const Instance& inst, const SampleDistribution& dist,
                      const EvaluationMode& mode = {});

struct BoundCheck {
  bool holds = false;
  double lhs = 0.0;  // the achieved expected value
  double rhs = 0.0;  // the bound it must reach
  double margin() const { return lhs - rhs; }
};

// E_T[f_avg(pi*_T)] >= (1 - r) f(empty) + r f_avg(pi*_V) - kTolerance.
BoundCheck VerifyTheorem1(const Instance& inst, const SampleDistribution& dist);

// E_T[f_avg(pi_T)] >= alpha r f_avg(pi*_V) - kTolerance for the builder's
// policies, i.e. the ratio bound 1 / (alpha r) written without division so
// that it stays meaningful when either side is zero.
BoundCheck VerifyCorollary2(const Instance& inst,
                            const SampleDistribution& dist,
                            const PolicyBuilder& builder, double alpha);

// V = {e}, a single state o, f(empty) = 0, f({e}) = 1, I = {empty, {e}}.
Instance LowerBoundInstance();

// Builders for the optimal and greedy policies.
PolicyBuilder OptimalPolicyBuilder();
PolicyBuilder AdaptiveGreedyBuilder();

}  // namespace asgap

#endif  // ASGAP_SAMPLING_GAP_H_
