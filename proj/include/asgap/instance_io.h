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


#ifndef ASGAP_INSTANCE_IO_H_
#define ASGAP_INSTANCE_IO_H_

#include <memory>
#include <optional>
#include <string>

#include <json.hpp>

#include "asgap/active_learning.h"
#include "asgap/core.h"
#include "asgap/independence.h"
#include "asgap/policy.h"
#include "asgap/viral_marketing.h"

namespace asgap {

using Json = nlohmann::json;

// An instance read from a file. Table and generated instances always carry a
// materialized `instance`; cascade instances carry `graph` and materialize
// only when the edge outcomes fit the budget.
struct LoadedInstance {
  // "table", "active-learning", "lower-bound", "ic" or "counterexample"
  std::string kind;
  std::shared_ptr<const Instance> instance;
  std::shared_ptr<const ActiveLearningModel> active_learning;
  std::shared_ptr<const Graph> graph;
  std::shared_ptr<const IcInstance> ic;
  std::vector<std::string> node_labels;
  SystemPtr system;
  int k = 0;

  // The materialized instance or a kCapacity error naming the reason.
  const Instance& Require() const;
};

struct LoadOptions {
  // Relative edge-list paths resolve against this directory.
  std::string base_dir = ".";
  double edge_probability = kDefaultEdgeProbability;
  std::size_t max_outcomes = 1 << 16;
};

SystemPtr SystemFromJson(const Json& j, int n);
Json SystemToJson(const IndependenceSystem& sys);

LoadedInstance InstanceFromJson(const Json& j, const LoadOptions& options = {});
LoadedInstance LoadInstanceFile(const std::string& path,
                                LoadOptions options = {});

// Table form of any materialized instance; utilities are tabulated over all
// 2^n subsets, so n is limited by the enumeration cap.
Json InstanceToJson(const Instance& inst);

Json PolicyToJson(const Policy& pi);
Policy PolicyFromJson(const Json& j);

Json ReadJsonFile(const std::string& path);

}  // namespace asgap

#endif  // ASGAP_INSTANCE_IO_H_
