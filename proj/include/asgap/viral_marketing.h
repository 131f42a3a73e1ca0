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


// Adaptive viral marketing under the independent cascade model.
//
// A realization is an edge outcome: every edge is live or blocked. Selecting
// node u reveals the status of every out-edge of every node reachable from u
// through live edges (u included); that view is the state of u. The utility
// of a seed set S is |S u {v : some selected u sees a live edge (w, v)}|.

#ifndef ASGAP_VIRAL_MARKETING_H_
#define ASGAP_VIRAL_MARKETING_H_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "asgap/core.h"
#include "asgap/independence.h"
#include "asgap/policy.h"
#include "asgap/solvers.h"

namespace asgap {

inline constexpr double kDefaultEdgeProbability = 0.01;

struct Edge {
  int from = 0;
  int to = 0;
  double probability = 0.0;
};

class Graph {
 public:
  explicit Graph(int nodes = 0);

  // Rejects self-loops, parallel edges, unknown nodes and probabilities
  // outside [0, 1].
  int AddEdge(int from, int to, double probability);

  int node_count() const { return static_cast<int>(out_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const Edge& edge(int id) const { return edges_[id]; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<int>& out_edges(int node) const { return out_[node]; }

 private:
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> out_;
  std::map<std::pair<int, int>, int> index_;
};

// A graph read from an edge list with its node labels; label(i) is the
// original id of dense node i.
struct LabeledGraph {
  Graph graph;
  std::vector<std::string> labels;
};

// One edge per line, "u v" or "u v p"; blank lines and lines starting with
// '#' are skipped. Node ids are arbitrary tokens, numbered densely in order
// of first appearance. Errors name the offending line.
LabeledGraph ParseEdgeList(std::string_view text,
                           double default_probability =
                               kDefaultEdgeProbability);
LabeledGraph ReadEdgeListFile(const std::string& path,
                              double default_probability =
                                  kDefaultEdgeProbability);
// "dense_id original_id" per line.
void WriteIdMap(const LabeledGraph& g, std::ostream& out);

// Directed Erdos-Renyi graph: every ordered pair is an edge with
// probability `density`, each carrying propagation probability `p`.
Graph RandomGraph(int nodes, double density, double p, std::uint64_t seed);

// Live (1) or blocked (0) per edge.
using EdgeOutcome = std::vector<std::uint8_t>;

enum : std::uint8_t { kBlocked = 0, kLive = 1, kUnobserved = 2 };

// Nodes reachable from `sources` over live edges, sources first, in BFS
// order.
std::vector<int> LiveReachable(const Graph& g, const std::vector<int>& sources,
                               const EdgeOutcome& outcome);

// Status per edge seen from u: kUnobserved unless its tail is live-reachable
// from u.
std::vector<std::uint8_t> NodeView(const Graph& g, const EdgeOutcome& outcome,
                                   int u);

struct CascadeResult {
  std::vector<int> activated;  // sorted
  std::vector<std::pair<int, bool>> revealed;  // (edge id, live), sorted
};

// Breadth-first diffusion from `seeds`. Every out-edge of a newly activated
// node is flipped once; entries of `pinned` other than kUnobserved force the
// status of that edge instead.
CascadeResult SimulateCascade(const Graph& g, const ItemSet& seeds,
                              std::uint64_t seed,
                              const std::vector<std::uint8_t>* pinned =
                                  nullptr);

// Exact instance over every edge outcome, for graphs with few random edges.
struct IcInstance {
  Graph graph;
  std::vector<EdgeOutcome> outcomes;  // prior support order
  // Interned node views; state id s means views[s].
  std::vector<std::vector<std::uint8_t>> views;
  // Heads of the live edges in each view.
  std::vector<std::vector<int>> reached;
  std::shared_ptr<const Instance> instance;

  // State of node u under an edge outcome, if that view occurs.
  std::optional<StateId> StateOf(const EdgeOutcome& outcome, int u) const;
};

// Edges with probability strictly between 0 and 1 are enumerated; at most
// `max_outcomes` outcomes are allowed.
IcInstance MaterializeIc(const Graph& g, SystemPtr system,
                         std::size_t max_outcomes = 1 << 16);

// Pre-sampled edge outcomes shared by all marginal queries (common random
// numbers), so every estimate is a deterministic function of its arguments.
class CascadeWorlds {
 public:
  CascadeWorlds(const Graph& g, int count, std::uint64_t seed);

  int count() const { return count_; }
  const Graph& graph() const { return *graph_; }

  // Average number of nodes that e would newly activate given the active
  // set, i.e. f_avg(e | psi) when `active` is everything psi shows active.
  double Gain(const std::vector<char>& active, int e) const;
  // Gain(active, e) for every node e at once; bitwise equal to calling Gain.
  std::vector<double> Gains(const std::vector<char>& active) const;
  // E[|reach(S + e)| - |reach(S)|] with no observations.
  double UnconditionedGain(const ItemSet& selected, int e) const;
  // Nodes reached from `node` in world w.
  std::vector<int> Reach(int w, int node,
                         const std::vector<char>* blocked = nullptr) const;

 private:
  bool Live(int w, int edge) const {
    return (bits_[static_cast<std::size_t>(w) * words_ + edge / 64] >>
            (edge % 64)) & 1u;
  }

  const Graph* graph_;
  int count_;
  std::size_t words_;
  std::vector<std::uint64_t> bits_;
  bool cached_ = false;
  std::vector<std::vector<int>> reach_;  // world-major when cached
  // For each node v, the (world, u) pairs with u != v whose reach holds v.
  std::vector<std::vector<std::pair<int, int>>> upstream_;
  std::vector<std::size_t> reach_total_;      // per node, over all worlds
};

// Adapter that lets the greedy solvers use sampled worlds on a materialized
// instance; the graph must outlive it.
class CascadeMarginalEstimator : public MarginalEstimator {
 public:
  CascadeMarginalEstimator(const IcInstance& ic, int trials,
                           std::uint64_t seed);
  double Estimate(const PartialRealization& psi, ItemId e) const override;
  double EstimateUnconditioned(const ItemSet& selected,
                               ItemId e) const override;

 private:
  const IcInstance& ic_;
  CascadeWorlds worlds_;
};

// The seven-node separating instance: a->b (1), b->c (0.1), d->e (1),
// e->f (1), f->g (1), nodes a..g numbered 0..6, unconstrained selection.
struct Counterexample {
  IcInstance ic;
  PartialRealization psi_a;  // nothing observed
  PartialRealization psi_b;  // b selected, (b, c) seen live
  Policy pi;                 // select a; if (b, c) is live select d
};
Counterexample CounterexampleInstance();

}  // namespace asgap

#endif  // ASGAP_VIRAL_MARKETING_H_
