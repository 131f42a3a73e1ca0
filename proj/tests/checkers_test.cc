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


#include "asgap/checkers.h"

#include <random>

#include <gtest/gtest.h>

#include "asgap/fixtures.h"
#include "asgap/sampling_gap.h"
#include "asgap/solvers.h"
#include "asgap/viral_marketing.h"
#include "oracles.h"

namespace asgap {
namespace {

constexpr double kTol = 1e-9;

TEST(CounterexampleTest, ReproducesBothPolicyMarginals) {
  Counterexample cx = CounterexampleInstance();
  const Instance& inst = *cx.ic.instance;
  EXPECT_NEAR(MarginalPolicy(inst, cx.psi_b, cx.pi), 5.0, kTol);
  EXPECT_NEAR(MarginalPolicy(inst, cx.psi_a, cx.pi), 2.5, kTol);
  EXPECT_NEAR(oracle::PolicyMarginal(inst, cx.psi_b, cx.pi), 5.0, kTol);
  EXPECT_NEAR(oracle::PolicyMarginal(inst, cx.psi_a, cx.pi), 2.5, kTol);
}

TEST(CounterexampleTest, LiveProbabilitySolvesTheMixture) {
  // (1 - p) * 2 + p * 7 = 2.5.
  Counterexample cx = CounterexampleInstance();
  const double p = (2.5 - 2.0) / (7.0 - 2.0);
  EXPECT_NEAR(p, 0.1, kTol);
  double live_mass = 0.0;
  for (std::size_t i = 0; i < cx.ic.outcomes.size(); ++i) {
    if (cx.ic.outcomes[i][1] == kLive) {
      live_mass += cx.ic.instance->prior.probability(static_cast<int>(i));
    }
  }
  EXPECT_NEAR(live_mass, p, kTol);
}

TEST(CounterexampleTest, FailsPolicyAdaptiveButPassesTheOthers) {
  Counterexample cx = CounterexampleInstance();
  const Instance& inst = *cx.ic.instance;
  CheckReport pa = CheckPolicyAdaptive(inst);
  ASSERT_FALSE(pa.holds);
  ASSERT_TRUE(pa.witness.has_value());
  const Witness& w = *pa.witness;
  EXPECT_LT(w.lhs, w.rhs - kTol);
  ASSERT_TRUE(w.policy.has_value());
  EXPECT_NEAR(oracle::PolicyMarginal(inst, w.psi_a, *w.policy), w.lhs, kTol);
  EXPECT_NEAR(oracle::PolicyMarginal(inst, w.psi_b, *w.policy), w.rhs, kTol);

  EXPECT_TRUE(CheckAdaptive(inst).holds);
  EXPECT_TRUE(CheckPolicywise(inst).holds);
}

TEST(CounterexampleTest, PairCheckFindsTheSeparatingPolicy) {
  Counterexample cx = CounterexampleInstance();
  CheckReport r = CheckPolicyAdaptivePair(*cx.ic.instance, cx.psi_a, cx.psi_b);
  ASSERT_FALSE(r.holds);
  EXPECT_NEAR(r.witness->lhs, 2.5, kTol);
  EXPECT_NEAR(r.witness->rhs, 5.0, kTol);
  // Same selections as pi on every realization of the prior.
  for (const auto& w : cx.ic.instance->prior.support()) {
    EXPECT_EQ(oracle::Walk(*r.witness->policy, w.states),
              oracle::Walk(cx.pi, w.states));
  }
}

TEST(CounterexampleTest, SuppliedWitnessRefutes) {
  Counterexample cx = CounterexampleInstance();
  CheckReport r = RefutePolicyAdaptiveWithWitness(*cx.ic.instance, cx.psi_a,
                                                  cx.psi_b, cx.pi);
  EXPECT_FALSE(r.holds);
  EXPECT_NEAR(r.witness->lhs, 2.5, kTol);
  EXPECT_NEAR(r.witness->rhs, 5.0, kTol);
}

TEST(RefuteTest, EqualPartialRealizationsAndEmptyPolicyHold) {
  Counterexample cx = CounterexampleInstance();
  const Instance& inst = *cx.ic.instance;
  EXPECT_TRUE(
      RefutePolicyAdaptiveWithWitness(inst, cx.psi_b, cx.psi_b, cx.pi).holds);
  CheckReport empty =
      RefutePolicyAdaptiveWithWitness(inst, cx.psi_a, cx.psi_b, Policy{});
  EXPECT_TRUE(empty.holds);
  EXPECT_EQ(empty.witness->lhs, 0.0);
  EXPECT_EQ(empty.witness->rhs, 0.0);
}

TEST(RefuteTest, MalformedWitnessIsRejected) {
  Counterexample cx = CounterexampleInstance();
  const Instance& inst = *cx.ic.instance;
  // psi_b is not below psi_a.
  EXPECT_THROW(
      {
        try {
          RefutePolicyAdaptiveWithWitness(inst, cx.psi_b, cx.psi_a, cx.pi);
        } catch (const Error& e) {
          EXPECT_EQ(e.code(), ErrorCode::kInvalidWitness);
          throw;
        }
      },
      Error);
  // A policy selecting b, which psi_b already observed.
  EXPECT_THROW(RefutePolicyAdaptiveWithWitness(inst, cx.psi_a, cx.psi_b,
                                               Policy::Path({1})),
               Error);
}

TEST(LowerBoundTest, AllThreeClassesHold) {
  Instance inst = LowerBoundInstance();
  EXPECT_TRUE(CheckAdaptive(inst).holds);
  EXPECT_TRUE(CheckPolicyAdaptive(inst).holds);
  EXPECT_TRUE(CheckPolicywise(inst).holds);
}

TEST(EnumerationTest, CanonicalOrderStartsWithTheEmptyObservation) {
  Counterexample cx = CounterexampleInstance();
  ExactModel model(*cx.ic.instance);
  std::vector<PartialRealization> all = ObservablePartialRealizations(model);
  ASSERT_FALSE(all.empty());
  EXPECT_TRUE(all.front().empty());
  for (std::size_t i = 1; i < all.size(); ++i) {
    EXPECT_LE(all[i - 1].size(), all[i].size());
  }
  EXPECT_EQ(all.size(), oracle::Observable(*cx.ic.instance).size());
}

// The exhaustive checkers agree with brute force on random instances.
TEST(CheckerOracleTest, AgreesOnRandomInstances) {
  std::mt19937_64 rng(7);
  int adaptive_failures = 0;
  int policy_failures = 0;
  int policywise_failures = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 3);
    const int states = 1 + static_cast<int>(rng() % 2);
    Instance inst = trial % 2 == 0
                        ? RandomCorrelatedInstance(rng, n, states)
                        : RandomIndependentInstance(
                              rng, {1, 3, 2, true}, RandomSystem(rng, n));
    const bool a = CheckAdaptive(inst).holds;
    const bool p = CheckPolicyAdaptive(inst).holds;
    const bool w = CheckPolicywise(inst).holds;
    EXPECT_EQ(a, oracle::AdaptiveHolds(inst)) << "trial " << trial;
    EXPECT_EQ(p, oracle::PolicyAdaptiveHolds(inst)) << "trial " << trial;
    EXPECT_EQ(w, oracle::PolicywiseHolds(inst)) << "trial " << trial;
    adaptive_failures += !a;
    policy_failures += !p;
    policywise_failures += !w;
  }
  // The random tables must exercise the failing branches too.
  EXPECT_GT(adaptive_failures, 0);
  EXPECT_GT(policy_failures, 0);
  EXPECT_GT(policywise_failures, 0);
}

TEST(CheckerOracleTest, WitnessesReevaluate) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    Instance inst = RandomCorrelatedInstance(rng, 3, 2);
    CheckReport a = CheckAdaptive(inst);
    if (!a.holds) {
      const Witness& w = *a.witness;
      EXPECT_NEAR(oracle::ItemMarginal(inst, w.psi_a, *w.item), w.lhs, kTol);
      EXPECT_NEAR(oracle::ItemMarginal(inst, w.psi_b, *w.item), w.rhs, kTol);
      EXPECT_LT(w.lhs, w.rhs - kTol);
    }
    CheckReport p = CheckPolicyAdaptive(inst);
    if (!p.holds) {
      const Witness& w = *p.witness;
      EXPECT_NEAR(MarginalPolicy(inst, w.psi_a, *w.policy), w.lhs, kTol);
      EXPECT_NEAR(MarginalPolicy(inst, w.psi_b, *w.policy), w.rhs, kTol);
      EXPECT_LT(w.lhs, w.rhs - kTol);
    }
    CheckReport s = CheckPolicywise(inst);
    if (!s.holds) {
      const Witness& w = *s.witness;
      EXPECT_NEAR(MarginalPolicy(inst, w.psi_a, *w.policy), w.lhs, kTol);
      EXPECT_NEAR(MarginalPolicy(inst, w.psi_b, *w.policy_b), w.rhs, kTol);
      EXPECT_LT(w.lhs, w.rhs - kTol);
      RestrictedSystem sys(inst.system, w.psi_b.Domain(), *w.restriction);
      EXPECT_TRUE(IsRestrictedPolicy(inst, *w.policy, sys, w.psi_a));
      EXPECT_TRUE(IsRestrictedPolicy(inst, *w.policy_b, sys, w.psi_b));
    }
  }
}

// Policy-adaptive submodularity implies the other two classes.
TEST(ImplicationTest, PolicyAdaptiveImpliesAdaptiveAndPolicywise) {
  std::mt19937_64 rng(3);
  int premises = 0;
  for (int trial = 0; trial < 150; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 3);
    Instance inst =
        trial % 3 == 0
            ? RandomCorrelatedInstance(rng, n, 1 + static_cast<int>(rng() % 2))
            : RandomIndependentInstance(rng, {1, 3, 2, true});
    if (!CheckPolicyAdaptive(inst).holds) continue;
    ++premises;
    EXPECT_TRUE(CheckAdaptive(inst).holds) << "trial " << trial;
    EXPECT_TRUE(CheckPolicywise(inst).holds) << "trial " << trial;
  }
  EXPECT_GT(premises, 10);
}

TEST(ConditioningTest, ConditionedPolicywiseInstancesStayPolicywise) {
  std::mt19937_64 rng(5);
  int tested = 0;
  while (tested < 20) {
    Instance inst = RandomIndependentInstance(rng, {2, 3, 2, true});
    if (!CheckPolicywise(inst).holds) continue;
    ++tested;
    ExactModel model(inst);
    for (const PartialRealization& psi :
         ObservablePartialRealizations(model)) {
      if (!inst.system->Contains(psi.Domain())) continue;
      Instance cond = ConditionInstance(inst, psi);
      EXPECT_TRUE(CheckPolicywise(cond).holds) << psi.ToString();
    }
  }
}

TEST(ConditioningTest, ConditionedValuesMatchMarginals) {
  std::mt19937_64 rng(8);
  Instance inst = RandomCorrelatedInstance(rng, 3, 2, MakeCardinality(3, 3));
  ExactModel model(inst);
  for (const PartialRealization& psi : ObservablePartialRealizations(model)) {
    Instance cond = ConditionInstance(inst, psi);
    for (ItemId e = 0; e < inst.n; ++e) {
      if (psi.Domain().Contains(e)) continue;
      EXPECT_NEAR(MarginalItem(cond, {}, e), MarginalItem(inst, psi, e), kTol);
    }
    EXPECT_NEAR(EmptySetValue(cond), 0.0, kTol);
  }
}

// A randomized policy is a mixture of trees, and its gap is the same mixture
// of the trees' gaps, so no mixture can beat the best deterministic tree.
TEST(MixtureTest, GapIsLinearAndMinimizedAtATree) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    Instance inst = RandomCorrelatedInstance(rng, 3, 2);
    std::vector<PartialRealization> all = oracle::Observable(inst);
    const PartialRealization& a = all[rng() % all.size()];
    std::vector<PartialRealization> above;
    for (const auto& b : all) {
      if (IsSubrealization(a, b)) above.push_back(b);
    }
    const PartialRealization& b = above[rng() % above.size()];
    std::vector<ItemId> items;
    for (ItemId e = 0; e < inst.n; ++e) {
      if (!b.Domain().Contains(e)) items.push_back(e);
    }
    std::vector<Policy> trees = oracle::AllTrees(items, 2, nullptr);
    std::vector<double> weights(3);
    std::vector<const Policy*> picks(3);
    double total = 0.0;
    for (int j = 0; j < 3; ++j) {
      weights[j] = std::uniform_real_distribution<double>(0.1, 1.0)(rng);
      picks[j] = &trees[rng() % trees.size()];
      total += weights[j];
    }
    // Joint enumeration over (tree draw, realization).
    double mixture_gap = 0.0;
    double combined_gap = 0.0;
    for (int j = 0; j < 3; ++j) {
      const double lambda = weights[j] / total;
      double lhs = 0.0;
      double rhs = 0.0;
      double mass_a = 0.0;
      double mass_b = 0.0;
      for (const auto& w : inst.prior.support()) {
        const ItemSet picked = oracle::Walk(*picks[j], w.states);
        if (IsConsistent(w.states, a)) {
          mass_a += w.probability;
          lhs += w.probability *
                 (inst.utility->Evaluate(a.Domain().Union(picked), w.states) -
                  inst.utility->Evaluate(a.Domain(), w.states));
        }
        if (IsConsistent(w.states, b)) {
          mass_b += w.probability;
          rhs += w.probability *
                 (inst.utility->Evaluate(b.Domain().Union(picked), w.states) -
                  inst.utility->Evaluate(b.Domain(), w.states));
        }
      }
      mixture_gap += lambda * (lhs / mass_a - rhs / mass_b);
      combined_gap += lambda * (MarginalPolicy(inst, a, *picks[j]) -
                                MarginalPolicy(inst, b, *picks[j]));
    }
    EXPECT_NEAR(mixture_gap, combined_gap, 1e-12);
    CheckReport pair = CheckPolicyAdaptivePair(inst, a, b);
    const double best =
        pair.holds ? 0.0 : pair.witness->lhs - pair.witness->rhs;
    EXPECT_LE(best, mixture_gap + kTol);
  }
}

TEST(ReportTest, DescribesWitnesses) {
  Counterexample cx = CounterexampleInstance();
  const std::string text = DescribeReport(CheckPolicyAdaptive(*cx.ic.instance));
  EXPECT_NE(text.find("FAILS"), std::string::npos);
  EXPECT_NE(text.find("policy="), std::string::npos);
  EXPECT_NE(DescribeReport(CheckReport{}).find("holds"), std::string::npos);
}

}  // namespace
}  // namespace asgap
