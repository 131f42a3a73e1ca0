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


#include "asgap/verify.h"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "asgap/checkers.h"
#include "asgap/exact_model.h"
#include "asgap/fixtures.h"
#include "asgap/independence.h"
#include "asgap/sampling_gap.h"
#include "asgap/viral_marketing.h"

namespace asgap {

namespace {

std::string Fmt(const char* format, double a, double b = 0.0) {
  char buf[128];
  std::snprintf(buf, sizeof buf, format, a, b);
  return buf;
}

template <typename Fn>
VerifyCheck Timed(const std::string& name, Fn fn) {
  const auto start = std::chrono::steady_clock::now();
  VerifyCheck check{name, false, "", 0.0};
  try {
    fn(check);
  } catch (const std::exception& e) {
    check.passed = false;
    check.detail = std::string("error: ") + e.what();
  }
  check.seconds = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - start)
                      .count();
  return check;
}

// Calls fn(sys, S, R) for every feasible S and every R disjoint from it.
template <typename Fn>
void ForAllRestrictions(const VerifyOptions& o, Fn fn) {
  std::mt19937_64 rng(o.seed);
  for (int n = 1; n <= o.max_system_items; ++n) {
    for (const SystemPtr& sys : SystemZoo(rng, n)) {
      const Mask all = (Mask{1} << n) - 1;
      for (const ItemSet& s : FeasibleSets(*sys)) {
        const Mask free = all & ~s.Mask();
        for (Mask r = 0;; r = (r - free) & free) {
          fn(sys, s, ItemSet::FromMask(r));
          if (r == free) break;
        }
      }
    }
  }
}

}  // namespace

bool VerifyReport::passed() const {
  for (const VerifyCheck& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

std::string VerifyReport::ToText() const {
  std::ostringstream out;
  for (const VerifyCheck& c : checks) {
    out << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail
        << Fmt(" (%.2fs)", c.seconds) << "\n";
  }
  out << (passed() ? "all checks passed" : "some checks FAILED") << "\n";
  return out.str();
}

VerifyScope VerifyScopeFromName(const std::string& name) {
  if (name == "lemmas") return VerifyScope::kLemmas;
  if (name == "theorem1") return VerifyScope::kTheorem1;
  if (name == "counterexample") return VerifyScope::kCounterexample;
  if (name == "all") return VerifyScope::kAll;
  throw Error(ErrorCode::kInvalidParameter,
              "scope must be lemmas, theorem1, counterexample or all");
}

std::vector<VerifyCheck> VerifyRestrictionProperties(const VerifyOptions& o) {
  std::vector<VerifyCheck> out;
  out.push_back(Timed("restriction-inside-base", [&](VerifyCheck& c) {
    std::size_t cases = 0, bad = 0;
    ForAllRestrictions(o, [&](const SystemPtr& sys, const ItemSet& s,
                              const ItemSet& r) {
      ++cases;
      RestrictedSystem restricted(sys, s, r);
      bool ok = IsDownwardClosed(restricted);
      for (const ItemSet& a : FeasibleSets(restricted)) {
        ok = ok && sys->Contains(a) && a.IsSubsetOf(r) &&
             sys->Contains(a.Union(s));
      }
      bad += ok ? 0 : 1;
    });
    c.passed = bad == 0 && cases > 0;
    c.detail = std::to_string(cases) + " (S, R) pairs, " +
               std::to_string(bad) + " violations";
  }));
  out.push_back(Timed("restriction-antitone-in-selection", [&](VerifyCheck& c) {
    std::size_t cases = 0, bad = 0;
    ForAllRestrictions(o, [&](const SystemPtr& sys, const ItemSet& s,
                              const ItemSet& r) {
      RestrictedSystem big(sys, s, r);
      const std::vector<ItemSet> feasible = FeasibleSets(big);
      const Mask sm = s.Mask();
      for (Mask sub = sm;; sub = (sub - 1) & sm) {
        ++cases;
        RestrictedSystem small(sys, ItemSet::FromMask(sub), r);
        for (const ItemSet& a : feasible) {
          if (!small.Contains(a)) {
            ++bad;
            break;
          }
        }
        if (sub == 0) break;
      }
    });
    c.passed = bad == 0 && cases > 0;
    c.detail = std::to_string(cases) + " nested pairs, " +
               std::to_string(bad) + " violations";
  }));
  out.push_back(Timed("selection-lowers-rank", [&](VerifyCheck& c) {
    std::size_t cases = 0, bad = 0;
    std::mt19937_64 rng(o.seed);
    for (int n = 1; n <= o.max_system_items; ++n) {
      for (const SystemPtr& sys : SystemZoo(rng, n)) {
        const int rank = sys->Rank();
        for (ItemId e = 0; e < n; ++e) {
          if (!sys->Contains({e})) continue;
          ++cases;
          RestrictedSystem after(sys, {e}, ItemSet::Range(n).Without(e));
          if (after.Rank() >= rank) ++bad;
        }
      }
    }
    c.passed = bad == 0 && cases > 0;
    c.detail = std::to_string(cases) + " selections, " +
               std::to_string(bad) + " violations";
  }));
  return out;
}

VerifyCheck VerifyConditioning(const VerifyOptions& o) {
  return Timed("conditioning-keeps-policywise", [&](VerifyCheck& c) {
    std::mt19937_64 rng(o.seed + 1);
    int fixtures = 0, conditioned = 0, bad = 0;
    while (fixtures < o.conditioning_fixtures) {
      Instance inst = RandomIndependentInstance(rng, {2, 3, 2, true});
      if (!CheckPolicywise(inst).holds) continue;
      ++fixtures;
      ExactModel model(inst);
      for (const PartialRealization& psi :
           ObservablePartialRealizations(model)) {
        if (!inst.system->Contains(psi.Domain())) continue;
        ++conditioned;
        if (!CheckPolicywise(ConditionInstance(inst, psi)).holds) ++bad;
      }
    }
    c.passed = bad == 0;
    c.detail = std::to_string(fixtures) + " fixtures, " +
               std::to_string(conditioned) + " conditioned instances, " +
               std::to_string(bad) + " violations";
  });
}

VerifyCheck VerifyImplicationChain(const VerifyOptions& o) {
  return Timed("policy-adaptive-implies-others", [&](VerifyCheck& c) {
    std::mt19937_64 rng(o.seed + 2);
    int premises = 0, bad = 0;
    for (int trial = 0; trial < o.implication_fixtures; ++trial) {
      const int n = 1 + static_cast<int>(rng() % 3);
      Instance inst =
          trial % 3 == 0
              ? RandomCorrelatedInstance(rng, n, 1 + static_cast<int>(rng() % 2))
              : RandomIndependentInstance(rng, {1, 3, 2, true});
      if (!CheckPolicyAdaptive(inst).holds) continue;
      ++premises;
      if (!CheckAdaptive(inst).holds || !CheckPolicywise(inst).holds) ++bad;
    }
    c.passed = bad == 0 && premises > 0;
    c.detail = std::to_string(o.implication_fixtures) + " fixtures, " +
               std::to_string(premises) + " policy-adaptive, " +
               std::to_string(bad) + " violations";
  });
}

std::vector<VerifyCheck> VerifySampledOptimumBound(const VerifyOptions& o) {
  std::vector<VerifyCheck> out;
  out.push_back(Timed("single-item-gap", [&](VerifyCheck& c) {
    const Instance inst = LowerBoundInstance();
    double worst = 0.0;
    for (int i = 1; i <= 10; ++i) {
      const double r = i / 10.0;
      const auto dist = SampleDistribution::Bernoulli(1, r);
      GapReport g = SamplingGap(inst, dist);
      const BoundCheck b = VerifyTheorem1(inst, dist);
      worst = std::max({worst, g.gap ? std::abs(*g.gap - 1.0 / r) : 1.0,
                        std::abs(b.margin())});
    }
    c.passed = worst <= kTolerance;
    c.detail = Fmt("gap equals 1/r and the bound is tight at r = 0.1..1.0 "
                   "(max deviation %.3g)",
                   worst);
  }));
  out.push_back(Timed("sampled-optimum-bound", [&](VerifyCheck& c) {
    std::mt19937_64 rng(o.seed + 3);
    int bad = 0;
    double min_margin = INFINITY;
    for (int t = 0; t < o.theorem_instances; ++t) {
      Instance inst = RandomIndependentInstance(rng, {});
      for (double r : {0.25, 0.5, 0.75}) {
        const BoundCheck b =
            VerifyTheorem1(inst, SampleDistribution::Bernoulli(inst.n, r));
        min_margin = std::min(min_margin, b.margin());
        if (!b.holds) ++bad;
      }
    }
    c.passed = bad == 0;
    c.detail = std::to_string(o.theorem_instances) +
               " instances x 3 rates, " + std::to_string(bad) +
               " violations" + Fmt(", smallest margin %.3g", min_margin);
  }));
  return out;
}

std::vector<VerifyCheck> VerifyCounterexample() {
  std::vector<VerifyCheck> out;
  const Counterexample cx = CounterexampleInstance();
  const Instance& inst = *cx.ic.instance;
  out.push_back(Timed("counterexample-policy-gains", [&](VerifyCheck& c) {
    const double rhs = MarginalPolicy(inst, cx.psi_b, cx.pi);
    const double lhs = MarginalPolicy(inst, cx.psi_a, cx.pi);
    const CheckReport r =
        RefutePolicyAdaptiveWithWitness(inst, cx.psi_a, cx.psi_b, cx.pi);
    c.passed = std::abs(rhs - 5.0) <= kTolerance &&
               std::abs(lhs - 2.5) <= kTolerance && !r.holds;
    c.detail = Fmt("lhs %.17g vs rhs %.17g", lhs, rhs);
  }));
  out.push_back(Timed("counterexample-not-policy-adaptive", [&](VerifyCheck& c) {
    const CheckReport r = CheckPolicyAdaptive(inst);
    bool witnessed = false;
    if (!r.holds && r.witness && r.witness->policy) {
      const CheckReport again = RefutePolicyAdaptiveWithWitness(
          inst, r.witness->psi_a, r.witness->psi_b, *r.witness->policy);
      witnessed = !again.holds;
    }
    c.passed = !r.holds && witnessed;
    c.detail = r.holds ? "check unexpectedly holds" : DescribeReport(r);
  }));
  out.push_back(Timed("counterexample-policywise", [&](VerifyCheck& c) {
    const CheckReport r = CheckPolicywise(inst);
    c.passed = r.holds;
    c.detail = DescribeReport(r);
  }));
  out.push_back(Timed("counterexample-adaptive", [&](VerifyCheck& c) {
    const CheckReport r = CheckAdaptive(inst);
    c.passed = r.holds;
    c.detail = DescribeReport(r);
  }));
  return out;
}

VerifyReport VerifySuite(VerifyScope scope, const VerifyOptions& o) {
  VerifyReport report;
  auto add = [&](std::vector<VerifyCheck> checks) {
    for (auto& c : checks) report.checks.push_back(std::move(c));
  };
  if (scope == VerifyScope::kLemmas || scope == VerifyScope::kAll) {
    add(VerifyRestrictionProperties(o));
    add({VerifyConditioning(o), VerifyImplicationChain(o)});
  }
  if (scope == VerifyScope::kTheorem1 || scope == VerifyScope::kAll) {
    add(VerifySampledOptimumBound(o));
  }
  if (scope == VerifyScope::kCounterexample || scope == VerifyScope::kAll) {
    add(VerifyCounterexample());
  }
  return report;
}

}  // namespace asgap
