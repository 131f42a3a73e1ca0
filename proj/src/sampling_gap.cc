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


#include "asgap/sampling_gap.h"

#include <algorithm>
#include <cmath>

#include "asgap/exact_model.h"
#include "asgap/solvers.h"

namespace asgap {

SampleDistribution SampleDistribution::Bernoulli(
    int n, double rate, std::map<ItemId, double> overrides) {
  if (n < 0 || !(rate >= 0.0 && rate <= 1.0)) {
    throw Error(ErrorCode::kInvalidParameter,
                "sampling rate must lie in [0, 1]");
  }
  SampleDistribution d;
  d.n_ = n;
  d.rate_ = rate;
  d.keep_.assign(n, rate);
  for (const auto& [e, q] : overrides) {
    if (e < 0 || e >= n) {
      throw Error(ErrorCode::kInvalidParameter, "override item out of range");
    }
    if (!(q >= rate && q <= 1.0)) {
      throw Error(ErrorCode::kInvalidParameter,
                  "inclusion probability of item " + std::to_string(e) +
                      " is outside [rate, 1]");
    }
    d.keep_[e] = q;
  }
  return d;
}

SampleDistribution SampleDistribution::Explicit(
    int n, std::vector<std::pair<ItemSet, double>> sets,
    std::optional<double> declared_rate) {
  if (sets.empty()) {
    throw Error(ErrorCode::kInvalidParameter, "empty sampling distribution");
  }
  SampleDistribution d;
  d.n_ = n;
  d.is_explicit_ = true;
  NeumaierSum total;
  std::vector<NeumaierSum> marginal(n);
  for (const auto& [set, q] : sets) {
    if (!(q > 0.0) || set.Bound() > n) {
      throw Error(ErrorCode::kInvalidParameter,
                  "explicit subsets need positive probability and items in "
                  "range");
    }
    total.Add(q);
    for (ItemId e : set.Items()) marginal[e].Add(q);
  }
  if (std::abs(total.Total() - 1.0) > kTolerance) {
    throw Error(ErrorCode::kInvalidParameter,
                "subset probabilities do not sum to one");
  }
  double min_marginal = 1.0;
  for (const NeumaierSum& m : marginal) {
    min_marginal = std::min(min_marginal, m.Total());
  }
  if (declared_rate && *declared_rate > min_marginal + kTolerance) {
    throw Error(ErrorCode::kInvalidParameter,
                "some item is sampled with probability below the declared "
                "rate");
  }
  d.rate_ = declared_rate ? *declared_rate : min_marginal;
  double running = 0.0;
  for (const auto& entry : sets) {
    running += entry.second;
    d.cumulative_.push_back(running);
  }
  d.sets_ = std::move(sets);
  return d;
}

double SampleDistribution::InclusionProbability(ItemId e) const {
  if (!is_explicit_) return keep_.at(e);
  NeumaierSum sum;
  for (const auto& [set, q] : sets_) {
    if (set.Contains(e)) sum.Add(q);
  }
  return sum.Total();
}

std::vector<std::pair<ItemSet, double>> SampleDistribution::Enumerate(
    int cap) const {
  if (is_explicit_) return sets_;
  if (n_ > cap || n_ > 62) {
    throw Error(ErrorCode::kCapacity,
                "cannot enumerate 2^" + std::to_string(n_) + " subsets");
  }
  std::vector<std::pair<ItemSet, double>> out;
  for (Mask m = 0; m < (Mask{1} << n_); ++m) {
    double q = 1.0;
    for (ItemId e = 0; e < n_ && q > 0.0; ++e) {
      q *= HasItem(m, e) ? keep_[e] : 1.0 - keep_[e];
    }
    if (q > 0.0) out.emplace_back(ItemSet::FromMask(m), q);
  }
  return out;
}

ItemSet SampleDistribution::Sample(std::mt19937_64& rng) const {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  if (is_explicit_) {
    const double u = unit(rng) * cumulative_.back();
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    if (it == cumulative_.end()) --it;
    return sets_[it - cumulative_.begin()].first;
  }
  ItemSet t;
  for (ItemId e = 0; e < n_; ++e) {
    if (unit(rng) < keep_[e]) t.Insert(e);
  }
  return t;
}

// ---------------------------------------------------------------------------

namespace {

// Averages value(T) over the distribution, caching per distinct subset.
template <typename ValueFn>
SampledValue Average(const SampleDistribution& dist, const EvaluationMode& mode,
                     ValueFn value) {
  std::map<ItemSet, double> cache;
  auto lookup = [&](const ItemSet& t) {
    auto it = cache.find(t);
    if (it == cache.end()) it = cache.emplace(t, value(t)).first;
    return it->second;
  };
  SampledValue out;
  out.exact = mode.exact;
  if (mode.exact) {
    NeumaierSum sum;
    for (const auto& [t, q] : dist.Enumerate()) sum.Add(q * lookup(t));
    out.mean = sum.Total();
    return out;
  }
  if (mode.trials < 1) {
    throw Error(ErrorCode::kInvalidParameter, "trials must be positive");
  }
  std::mt19937_64 rng(mode.seed);
  NeumaierSum sum;
  NeumaierSum sum_sq;
  for (int t = 0; t < mode.trials; ++t) {
    const double v = lookup(dist.Sample(rng));
    sum.Add(v);
    sum_sq.Add(v * v);
  }
  const double n = mode.trials;
  out.mean = sum.Total() / n;
  if (mode.trials > 1) {
    const double var =
        std::max(0.0, (sum_sq.Total() - n * out.mean * out.mean) / (n - 1));
    out.std_error = std::sqrt(var / n);
  }
  return out;
}

void CheckDimensions(const Instance& inst, const SampleDistribution& dist) {
  if (dist.n() != inst.n) {
    throw Error(ErrorCode::kInvalidParameter,
                "sampling distribution and instance disagree on n");
  }
}

}  // namespace

double OptimalValue(const Instance& inst) {
  ExactModel model(inst);
  return model.EmptySetValue() +
         OptimalRestrictedValue(model, *inst.system, PartialRealization{});
}

SampledValue ExpectedSampledOpt(const Instance& inst,
                                const SampleDistribution& dist,
                                const EvaluationMode& mode) {
  CheckDimensions(inst, dist);
  ExactModel model(inst);
  const double empty = model.EmptySetValue();
  return Average(dist, mode, [&](const ItemSet& t) {
    RestrictedSystem sys(inst.system, ItemSet{}, t);
    return empty + OptimalRestrictedValue(model, sys, PartialRealization{});
  });
}

SampledValue ExpectedSampledValue(const Instance& inst,
                                  const SampleDistribution& dist,
                                  const PolicyBuilder& builder,
                                  const EvaluationMode& mode) {
  CheckDimensions(inst, dist);
  const double empty = EmptySetValue(inst);
  return Average(dist, mode, [&](const ItemSet& t) {
    RestrictedSystem sys(inst.system, ItemSet{}, t);
    Policy pi = builder(inst, sys, t);
    if (!IsRestrictedPolicy(inst, pi, sys)) {
      throw Error(ErrorCode::kPolicyDomainViolation,
                  "built policy leaves the sampled ground set {" + t.Key() +
                      "}");
    }
    return empty + MarginalPolicy(inst, PartialRealization{}, pi);
  });
}

GapReport SamplingGap(const Instance& inst, const SampleDistribution& dist,
                      const EvaluationMode& mode) {
  GapReport report;
  report.rate = dist.rate();
  report.exact = mode.exact;
  report.empty_value = EmptySetValue(inst);
  report.full_value = OptimalValue(inst);
  SampledValue sampled = ExpectedSampledOpt(inst, dist, mode);
  report.expected_sampled_value = sampled.mean;
  report.std_error = sampled.std_error;
  report.bound_rhs =
      (1.0 - report.rate) * report.empty_value + report.rate * report.full_value;
  if (sampled.mean > 0.0) {
    report.gap = report.full_value / sampled.mean;
  } else {
    report.degenerate = true;
  }
  return report;
}

BoundCheck VerifyTheorem1(const Instance& inst,
                          const SampleDistribution& dist) {
  const double r = dist.rate();
  BoundCheck check;
  check.lhs = ExpectedSampledOpt(inst, dist).mean;
  check.rhs = (1.0 - r) * EmptySetValue(inst) + r * OptimalValue(inst);
  check.holds = check.lhs >= check.rhs - kTolerance;
  return check;
}

BoundCheck VerifyCorollary2(const Instance& inst,
                            const SampleDistribution& dist,
                            const PolicyBuilder& builder, double alpha) {
  BoundCheck check;
  check.lhs = ExpectedSampledValue(inst, dist, builder).mean;
  check.rhs = alpha * dist.rate() * OptimalValue(inst);
  check.holds = check.lhs >= check.rhs - kTolerance;
  return check;
}

Instance LowerBoundInstance() {
  Prior prior({WeightedRealization{{0}, 1.0}});
  std::map<ItemSet, std::vector<double>> table{{ItemSet{}, {0.0}},
                                               {ItemSet{0}, {1.0}}};
  auto utility = std::make_shared<TableUtility>(
      std::vector<Realization>{{0}}, std::move(table));
  return Instance(1, 1, std::move(prior), std::move(utility),
                  MakeCardinality(1, 1));
}

PolicyBuilder OptimalPolicyBuilder() {
  return [](const Instance& inst, const IndependenceSystem& sys,
            const ItemSet&) {
    return OptimalRestrictedPolicy(inst, sys, PartialRealization{}).policy;
  };
}

PolicyBuilder AdaptiveGreedyBuilder() {
  return [](const Instance& inst, const IndependenceSystem& sys,
            const ItemSet&) {
    ExactMarginalEstimator estimator(inst);
    return AdaptiveGreedy(inst, sys, estimator);
  };
}

}  // namespace asgap
