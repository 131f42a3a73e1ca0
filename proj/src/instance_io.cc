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


#include "asgap/instance_io.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "asgap/sampling_gap.h"

namespace asgap {

namespace {

[[noreturn]] void Bad(const std::string& what) {
  throw Error(ErrorCode::kInvalidInstance, what);
}

const Json& Field(const Json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) {
    Bad(std::string("missing field '") + name + "'");
  }
  return j.at(name);
}

template <typename T>
T Get(const Json& j, const char* name) {
  try {
    return Field(j, name).get<T>();
  } catch (const nlohmann::json::exception& e) {
    Bad(std::string("field '") + name + "': " + e.what());
  }
}

template <typename T>
T GetOr(const Json& j, const char* name, T fallback) {
  return j.is_object() && j.contains(name) ? Get<T>(j, name) : fallback;
}

ItemSet SetFromJson(const Json& j) {
  ItemSet s;
  for (const Json& e : j) s.Insert(e.get<ItemId>());
  return s;
}

Json SetToJson(const ItemSet& s) {
  Json out = Json::array();
  for (ItemId e : s.Items()) out.push_back(e);
  return out;
}

LoadedInstance TableInstance(const Json& j) {
  const int n = Get<int>(j, "n");
  const int state_count = Get<int>(j, "state_count");
  std::vector<WeightedRealization> support;
  for (const Json& w : Field(j, "prior")) {
    support.push_back({Get<Realization>(w, "states"), Get<double>(w, "prob")});
  }
  Prior prior(support);

  const Json& table = Field(Field(j, "utility"), "table");
  if (!table.is_object()) Bad("utility table must be an object");
  std::map<ItemSet, std::vector<double>> values;
  for (auto it = table.begin(); it != table.end(); ++it) {
    ItemSet s = ItemSet::FromKey(it.key());
    if (s.Bound() > n) Bad("utility key '" + it.key() + "' outside [0, n)");
    std::vector<double> row;
    try {
      row = it.value().get<std::vector<double>>();
    } catch (const nlohmann::json::exception&) {
      Bad("utility row '" + it.key() + "' must be a list of numbers");
    }
    if (static_cast<int>(row.size()) != prior.size()) {
      Bad("utility row '" + it.key() + "' needs one value per realization");
    }
    values.emplace(std::move(s), std::move(row));
  }
  std::vector<Realization> order;
  for (const auto& w : prior.support()) order.push_back(w.states);

  LoadedInstance out;
  out.kind = "table";
  out.system = SystemFromJson(Field(j, "system"), n);
  out.instance = std::make_shared<Instance>(
      n, state_count, prior,
      std::make_shared<TableUtility>(order, std::move(values)), out.system);
  out.k = out.system->Rank(62);
  return out;
}

LoadedInstance ActiveLearningFromJson(const Json& j) {
  ActiveLearningParams p;
  p.hypotheses = GetOr(j, "hypotheses", p.hypotheses);
  p.points = GetOr(j, "points", p.points);
  p.queries = GetOr(j, "queries", p.queries);
  p.k = GetOr(j, "k", p.k);
  p.seed = GetOr<std::uint64_t>(j, "seed", p.seed);
  if (j.contains("labels")) {
    const Json& labels = j.at("labels");
    p.labels = labels.is_array() ? labels.get<std::vector<int>>()
                                 : std::vector<int>{labels.get<int>()};
  }
  ActiveLearningInstance al = GenerateActiveLearningInstance(p);
  LoadedInstance out;
  out.kind = "active-learning";
  out.active_learning = al.model;
  out.system = j.contains("system")
                   ? SystemFromJson(j.at("system"), al.instance.n)
                   : al.instance.system;
  out.instance = std::make_shared<Instance>(
      al.instance.n, al.instance.state_count, al.instance.prior,
      al.instance.utility, out.system);
  out.k = p.k;
  return out;
}

LoadedInstance CascadeFromJson(const Json& j, const LoadOptions& options) {
  const double p_default =
      GetOr(j, "edge_prob", options.edge_probability);
  LoadedInstance out;
  out.kind = "ic";
  Graph graph;
  if (j.contains("edge_list")) {
    std::filesystem::path path = Get<std::string>(j, "edge_list");
    if (path.is_relative()) path = options.base_dir / path;
    LabeledGraph lg = ReadEdgeListFile(path.string(), p_default);
    graph = std::move(lg.graph);
    out.node_labels = std::move(lg.labels);
  } else if (j.contains("synthetic")) {
    const Json& s = j.at("synthetic");
    graph = RandomGraph(Get<int>(s, "nodes"), GetOr(s, "density", 0.1),
                        GetOr(s, "p", p_default),
                        GetOr<std::uint64_t>(s, "seed", 0));
  } else {
    const Json& edges = Field(j, "edges");
    int nodes = GetOr(j, "nodes", 0);
    for (const Json& e : edges) {
      nodes = std::max({nodes, e.at(0).get<int>() + 1, e.at(1).get<int>() + 1});
    }
    graph = Graph(nodes);
    for (const Json& e : edges) {
      if (e.size() < 2 || e.size() > 3) Bad("edge must be [u, v] or [u, v, p]");
      graph.AddEdge(e[0].get<int>(), e[1].get<int>(),
                    e.size() == 3 ? e[2].get<double>() : p_default);
    }
  }
  const int n = graph.node_count();
  out.k = GetOr(j, "k", n);
  out.system = j.contains("system") ? SystemFromJson(j.at("system"), n)
                                    : MakeCardinality(n, out.k);
  out.graph = std::make_shared<const Graph>(graph);
  try {
    auto ic = std::make_shared<IcInstance>(
        MaterializeIc(graph, out.system, options.max_outcomes));
    out.instance = ic->instance;
    out.ic = std::move(ic);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kCapacity) throw;
  }
  return out;
}

Json NodeToJson(const Policy& pi, int node) {
  if (node == Policy::kStop) return "stop";
  const Policy::Node& x = pi.node(node);
  Json children = Json::object();
  for (const auto& [o, child] : x.children) {
    children[std::to_string(o)] = NodeToJson(pi, child);
  }
  if (x.otherwise != Policy::kMissing) {
    children["*"] = NodeToJson(pi, x.otherwise);
  }
  return Json{{"item", x.item}, {"children", children}};
}

int NodeFromJson(const Json& j, Policy& pi, int depth) {
  auto malformed = [](const std::string& what) {
    throw Error(ErrorCode::kMalformedPolicy, what);
  };
  if (depth > 4096) malformed("policy nested too deeply");
  if (j.is_string()) {
    if (j.get<std::string>() != "stop") malformed("leaf must be \"stop\"");
    return Policy::kStop;
  }
  if (!j.is_object() || !j.contains("item") || !j.at("item").is_number_integer()) {
    malformed("policy node needs an integer \"item\"");
  }
  const int node = pi.AddNode(j.at("item").get<ItemId>());
  if (!j.contains("children")) return node;
  const Json& children = j.at("children");
  if (!children.is_object()) malformed("\"children\" must be an object");
  for (auto it = children.begin(); it != children.end(); ++it) {
    const int child = NodeFromJson(it.value(), pi, depth + 1);
    if (it.key() == "*") {
      pi.SetDefault(node, child);
      continue;
    }
    StateId o = 0;
    try {
      std::size_t used = 0;
      o = std::stoi(it.key(), &used);
      if (used != it.key().size() || o < 0) throw std::invalid_argument("");
    } catch (const std::exception&) {
      malformed("bad state key '" + it.key() + "'");
    }
    pi.SetChild(node, o, child);
  }
  return node;
}

}  // namespace

const Instance& LoadedInstance::Require() const {
  if (!instance) {
    throw Error(ErrorCode::kCapacity,
                "instance is too large to materialize; only Monte-Carlo "
                "experiments are available");
  }
  return *instance;
}

SystemPtr SystemFromJson(const Json& j, int n) {
  const std::string kind = Get<std::string>(j, "kind");
  try {
    if (kind == "cardinality") return MakeCardinality(n, Get<int>(j, "k"));
    if (kind == "knapsack") {
      auto costs = Get<std::vector<double>>(j, "costs");
      if (static_cast<int>(costs.size()) != n) {
        Bad("knapsack needs one cost per item");
      }
      return MakeKnapsack(std::move(costs), Get<double>(j, "budget"));
    }
    if (kind == "partition") {
      return MakePartition(n, Get<std::vector<std::vector<ItemId>>>(j, "blocks"),
                           Get<std::vector<int>>(j, "limits"));
    }
    if (kind == "explicit") {
      std::vector<ItemSet> sets;
      for (const Json& s : Field(j, "sets")) sets.push_back(SetFromJson(s));
      return std::make_shared<ExplicitSystem>(n, std::move(sets));
    }
  } catch (const nlohmann::json::exception& e) {
    Bad(std::string("system: ") + e.what());
  }
  Bad("unknown system kind '" + kind + "'");
}

Json SystemToJson(const IndependenceSystem& sys) {
  if (auto* c = dynamic_cast<const CardinalitySystem*>(&sys)) {
    return {{"kind", "cardinality"}, {"k", c->k()}};
  }
  if (auto* k = dynamic_cast<const KnapsackSystem*>(&sys)) {
    return {{"kind", "knapsack"}, {"costs", k->costs()}, {"budget", k->budget()}};
  }
  if (auto* p = dynamic_cast<const PartitionMatroid*>(&sys)) {
    return {{"kind", "partition"}, {"blocks", p->blocks()},
            {"limits", p->limits()}};
  }
  Json sets = Json::array();
  if (auto* x = dynamic_cast<const ExplicitSystem*>(&sys)) {
    for (const ItemSet& s : x->family()) sets.push_back(SetToJson(s));
  } else {
    for (const ItemSet& s : FeasibleSets(sys)) sets.push_back(SetToJson(s));
  }
  return {{"kind", "explicit"}, {"sets", sets}};
}

LoadedInstance InstanceFromJson(const Json& j, const LoadOptions& options) {
  if (!j.is_object()) Bad("instance must be an object");
  std::string kind = "table";
  if (j.contains("kind")) {
    kind = Get<std::string>(j, "kind");
  } else if (j.contains("utility") && j.at("utility").contains("kind")) {
    kind = Get<std::string>(j.at("utility"), "kind");
  }
  const Json& params =
      j.contains("kind") || !j.contains("utility") ? j : j.at("utility");
  if (kind == "table") return TableInstance(j);
  if (kind == "active-learning") return ActiveLearningFromJson(params);
  if (kind == "ic") return CascadeFromJson(params, options);
  if (kind == "counterexample") {
    Counterexample cx = CounterexampleInstance();
    LoadedInstance out;
    out.kind = kind;
    out.graph = std::make_shared<const Graph>(cx.ic.graph);
    out.instance = cx.ic.instance;
    out.system = out.instance->system;
    out.ic = std::make_shared<const IcInstance>(std::move(cx.ic));
    out.k = out.graph->node_count();
    return out;
  }
  if (kind == "lower-bound") {
    LoadedInstance out;
    out.kind = kind;
    out.instance = std::make_shared<Instance>(LowerBoundInstance());
    out.system = out.instance->system;
    out.k = 1;
    return out;
  }
  Bad("unknown instance kind '" + kind + "'");
}

Json ReadJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kParse, "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kParse, path + ": " + e.what());
  }
}

LoadedInstance LoadInstanceFile(const std::string& path, LoadOptions options) {
  const Json j = ReadJsonFile(path);
  if (options.base_dir == ".") {
    options.base_dir = std::filesystem::path(path).parent_path().string();
    if (options.base_dir.empty()) options.base_dir = ".";
  }
  return InstanceFromJson(j, options);
}

Json InstanceToJson(const Instance& inst) {
  const std::vector<ItemSet> subsets =
      FeasibleSets(CardinalitySystem(inst.n, inst.n));
  Json prior = Json::array();
  for (const auto& w : inst.prior.support()) {
    prior.push_back({{"states", w.states}, {"prob", w.probability}});
  }
  Json table = Json::object();
  for (const ItemSet& s : subsets) {
    Json row = Json::array();
    for (const auto& w : inst.prior.support()) {
      row.push_back(inst.utility->Evaluate(s, w.states));
    }
    table[s.Key()] = row;
  }
  return {{"n", inst.n},
          {"state_count", inst.state_count},
          {"prior", prior},
          {"utility", {{"table", table}}},
          {"system", SystemToJson(*inst.system)}};
}

Json PolicyToJson(const Policy& pi) { return NodeToJson(pi, pi.root()); }

Policy PolicyFromJson(const Json& j) {
  Policy pi;
  pi.SetRoot(NodeFromJson(j, pi, 0));
  return pi;
}

}  // namespace asgap
