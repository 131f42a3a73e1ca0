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


// Pool-based active learning with the generalized binary search utility
//   f(S, phi) = 1 - p_H(H(phi(S))),
// the expected reduction of version-space mass after asking the queries S.
//
// A query covers one or two data points. Asking it reveals every covered
// label at once; a two-point answer is encoded as l1 + L1 * l2 where L1 is
// the label count of the first point.

#ifndef ASGAP_ACTIVE_LEARNING_H_
#define ASGAP_ACTIVE_LEARNING_H_

#include <cstdint>
#include <memory>
#include <random>
#include <vector>

#include "asgap/core.h"
#include "asgap/independence.h"
#include "asgap/solvers.h"

namespace asgap {

struct Hypothesis {
  std::vector<StateId> labels;  // one label per data point
  double prior_mass = 0.0;
};

struct QueryItem {
  std::vector<int> points;  // one or two distinct data points
};

struct VersionSpace {
  std::vector<int> hypotheses;
  double mass = 0.0;
};

class ActiveLearningModel {
 public:
  ActiveLearningModel(std::vector<Hypothesis> hypotheses,
                      std::vector<int> label_counts,
                      std::vector<QueryItem> queries);

  int hypothesis_count() const { return static_cast<int>(hypotheses_.size()); }
  int query_count() const { return static_cast<int>(queries_.size()); }
  int state_count() const { return state_count_; }
  const std::vector<Hypothesis>& hypotheses() const { return hypotheses_; }
  const std::vector<QueryItem>& queries() const { return queries_; }
  const std::vector<int>& label_counts() const { return label_counts_; }

  // The state hypothesis h reports for query q.
  StateId Answer(int h, int q) const { return answers_[h][q]; }
  const std::vector<StateId>& Answers(int h) const { return answers_[h]; }

  VersionSpace Consistent(const PartialRealization& psi) const;

  // The prior over answer vectors (hypotheses with equal answer vectors
  // merge here) and the utility, which keeps every hypothesis separate.
  Prior InducedPrior() const;
  std::shared_ptr<const UtilityFunction> Utility() const;
  Instance BuildInstance(SystemPtr system) const;

 private:
  std::vector<Hypothesis> hypotheses_;
  std::vector<int> label_counts_;
  std::vector<QueryItem> queries_;
  std::vector<std::vector<StateId>> answers_;
  int state_count_ = 1;
};

// Exact marginals computed from version-space masses; agrees with the
// generic exact estimator but avoids re-evaluating the utility.
class GbsMarginalEstimator : public MarginalEstimator {
 public:
  explicit GbsMarginalEstimator(std::shared_ptr<const ActiveLearningModel> m)
      : model_(std::move(m)) {}
  double Estimate(const PartialRealization& psi, ItemId e) const override;
  double EstimateUnconditioned(const ItemSet& selected,
                               ItemId e) const override;

 private:
  std::shared_ptr<const ActiveLearningModel> model_;
};

struct ActiveLearningParams {
  int hypotheses = 50;
  int points = 10;
  int queries = 8;
  // Either a single label count shared by every point or one per point.
  std::vector<int> labels = {2};
  int k = 5;
  std::uint64_t seed = 0;
};

struct ActiveLearningInstance {
  std::shared_ptr<const ActiveLearningModel> model;
  Instance instance;
};

// Masses uniform on (0, 1) then normalized, labels uniform per point, and
// each query covering one or two uniformly chosen points. The system is a
// cardinality constraint with budget k.
ActiveLearningInstance GenerateActiveLearningInstance(
    const ActiveLearningParams& params);

// Label counts for the mixed setting: 80% of the points binary, 10% with
// three labels and 10% with four, assigned to random points.
std::vector<int> MixedLabelCounts(int points, std::uint64_t seed);

}  // namespace asgap

#endif  // ASGAP_ACTIVE_LEARNING_H_
