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


#include "asgap/viral_marketing.h"

#include <algorithm>
#include <charconv>
#include <deque>
#include <fstream>
#include <random>
#include <sstream>
#include <unordered_map>

#include "asgap/exact_model.h"

namespace asgap {

Graph::Graph(int nodes) {
  if (nodes < 0) throw Error(ErrorCode::kInvalidParameter, "negative nodes");
  out_.resize(nodes);
}

int Graph::AddEdge(int from, int to, double probability) {
  if (from < 0 || to < 0 || from >= node_count() || to >= node_count()) {
    throw Error(ErrorCode::kInvalidParameter, "edge endpoint out of range");
  }
  if (from == to) {
    throw Error(ErrorCode::kInvalidParameter,
                "self-loop on node " + std::to_string(from));
  }
  if (!(probability >= 0.0 && probability <= 1.0)) {
    throw Error(ErrorCode::kInvalidParameter,
                "propagation probability outside [0, 1]");
  }
  if (index_.count({from, to})) {
    throw Error(ErrorCode::kDuplicateEdge,
                "duplicate edge " + std::to_string(from) + " -> " +
                    std::to_string(to));
  }
  const int id = edge_count();
  edges_.push_back({from, to, probability});
  out_[from].push_back(id);
  index_.emplace(std::make_pair(from, to), id);
  return id;
}

// ---------------------------------------------------------------------------

namespace {

Error LineError(ErrorCode code, int line, const std::string& what) {
  return Error(code, "line " + std::to_string(line) + ": " + what);
}

}  // namespace

LabeledGraph ParseEdgeList(std::string_view text,
                           double default_probability) {
  struct RawEdge {
    int from, to;
    double p;
    int line;
  };
  std::unordered_map<std::string, int> ids;
  std::vector<std::string> labels;
  std::vector<RawEdge> raw;
  auto node_id = [&](const std::string& token) {
    auto [it, inserted] = ids.emplace(token, static_cast<int>(labels.size()));
    if (inserted) labels.push_back(token);
    return it->second;
  };

  int line_number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string line(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') {
      if (end == text.size()) break;
      continue;
    }
    std::istringstream in(line);
    std::string u, v, p, extra;
    in >> u >> v;
    if (v.empty()) {
      throw LineError(ErrorCode::kParse, line_number,
                      "expected \"u v\" or \"u v p\"");
    }
    double probability = default_probability;
    if (in >> p) {
      const char* b = p.data();
      const char* e = p.data() + p.size();
      auto [ptr, ec] = std::from_chars(b, e, probability);
      if (ec != std::errc() || ptr != e) {
        throw LineError(ErrorCode::kParse, line_number,
                        "bad probability \"" + p + "\"");
      }
      if (!(probability >= 0.0 && probability <= 1.0)) {
        throw LineError(ErrorCode::kParse, line_number,
                        "probability outside [0, 1]");
      }
    }
    if (in >> extra) {
      throw LineError(ErrorCode::kParse, line_number, "trailing fields");
    }
    if (u == v) {
      throw LineError(ErrorCode::kParse, line_number, "self-loop on " + u);
    }
    int from = node_id(u);
    int to = node_id(v);
    raw.push_back({from, to, probability, line_number});
    if (end == text.size()) break;
  }

  LabeledGraph out{Graph(static_cast<int>(labels.size())), std::move(labels)};
  for (const RawEdge& e : raw) {
    try {
      out.graph.AddEdge(e.from, e.to, e.p);
    } catch (const Error& err) {
      throw LineError(err.code(), e.line, err.what());
    }
  }
  return out;
}

LabeledGraph ReadEdgeListFile(const std::string& path,
                              double default_probability) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kParse, "cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseEdgeList(buffer.str(), default_probability);
}

void WriteIdMap(const LabeledGraph& g, std::ostream& out) {
  for (std::size_t i = 0; i < g.labels.size(); ++i) {
    out << i << ' ' << g.labels[i] << '\n';
  }
}

Graph RandomGraph(int nodes, double density, double p, std::uint64_t seed) {
  if (!(density >= 0.0 && density <= 1.0)) {
    throw Error(ErrorCode::kInvalidParameter, "density outside [0, 1]");
  }
  Graph g(nodes);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int u = 0; u < nodes; ++u) {
    for (int v = 0; v < nodes; ++v) {
      if (u != v && unit(rng) < density) g.AddEdge(u, v, p);
    }
  }
  return g;
}

// ---------------------------------------------------------------------------

std::vector<int> LiveReachable(const Graph& g, const std::vector<int>& sources,
                               const EdgeOutcome& outcome) {
  std::vector<char> seen(g.node_count(), 0);
  std::vector<int> order;
  for (int s : sources) {
    if (!seen[s]) {
      seen[s] = 1;
      order.push_back(s);
    }
  }
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (int id : g.out_edges(order[i])) {
      const int to = g.edge(id).to;
      if (outcome[id] == kLive && !seen[to]) {
        seen[to] = 1;
        order.push_back(to);
      }
    }
  }
  return order;
}

std::vector<std::uint8_t> NodeView(const Graph& g, const EdgeOutcome& outcome,
                                   int u) {
  std::vector<std::uint8_t> view(g.edge_count(), kUnobserved);
  for (int v : LiveReachable(g, {u}, outcome)) {
    for (int id : g.out_edges(v)) view[id] = outcome[id];
  }
  return view;
}

CascadeResult SimulateCascade(const Graph& g, const ItemSet& seeds,
                              std::uint64_t seed,
                              const std::vector<std::uint8_t>* pinned) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<char> active(g.node_count(), 0);
  std::deque<int> frontier;
  for (ItemId s : seeds.Items()) {
    if (s >= g.node_count()) {
      throw Error(ErrorCode::kInvalidParameter, "seed node out of range");
    }
    active[s] = 1;
    frontier.push_back(s);
  }
  CascadeResult result;
  while (!frontier.empty()) {
    const int u = frontier.front();
    frontier.pop_front();
    for (int id : g.out_edges(u)) {
      bool live;
      if (pinned && (*pinned)[id] != kUnobserved) {
        live = (*pinned)[id] == kLive;
      } else {
        live = unit(rng) < g.edge(id).probability;
      }
      result.revealed.emplace_back(id, live);
      const int v = g.edge(id).to;
      if (live && !active[v]) {
        active[v] = 1;
        frontier.push_back(v);
      }
    }
  }
  for (int v = 0; v < g.node_count(); ++v) {
    if (active[v]) result.activated.push_back(v);
  }
  std::sort(result.revealed.begin(), result.revealed.end());
  return result;
}

// ---------------------------------------------------------------------------

namespace {

class IcUtility : public UtilityFunction {
 public:
  IcUtility(int nodes, std::shared_ptr<const std::vector<std::vector<int>>>
                           reached)
      : nodes_(nodes), reached_(std::move(reached)) {}

  double Evaluate(const ItemSet& s, const Realization& phi) const override {
    std::vector<char> hit(nodes_, 0);
    int count = 0;
    auto mark = [&](int v) {
      if (!hit[v]) {
        hit[v] = 1;
        ++count;
      }
    };
    for (ItemId u : s.Items()) {
      mark(u);
      for (int v : (*reached_)[phi[u]]) mark(v);
    }
    return count;
  }

 private:
  int nodes_;
  std::shared_ptr<const std::vector<std::vector<int>>> reached_;
};

}  // namespace

std::optional<StateId> IcInstance::StateOf(const EdgeOutcome& outcome,
                                           int u) const {
  std::vector<std::uint8_t> view = NodeView(graph, outcome, u);
  auto it = std::find(views.begin(), views.end(), view);
  if (it == views.end()) return std::nullopt;
  return static_cast<StateId>(it - views.begin());
}

IcInstance MaterializeIc(const Graph& g, SystemPtr system,
                         std::size_t max_outcomes) {
  std::vector<int> random_edges;
  EdgeOutcome base(g.edge_count(), kBlocked);
  for (int id = 0; id < g.edge_count(); ++id) {
    const double p = g.edge(id).probability;
    if (p >= 1.0) base[id] = kLive;
    if (p > 0.0 && p < 1.0) random_edges.push_back(id);
  }
  if (random_edges.size() >= 63 ||
      (std::size_t{1} << random_edges.size()) > max_outcomes) {
    throw Error(ErrorCode::kCapacity,
                std::to_string(random_edges.size()) +
                    " random edges exceed the materialization budget");
  }

  IcInstance ic{g, {}, {}, {}, nullptr};
  std::map<std::vector<std::uint8_t>, StateId> interned;
  std::vector<WeightedRealization> support;
  const Mask outcomes = Mask{1} << random_edges.size();
  for (Mask m = 0; m < outcomes; ++m) {
    EdgeOutcome outcome = base;
    double q = 1.0;
    for (std::size_t j = 0; j < random_edges.size(); ++j) {
      const double p = g.edge(random_edges[j]).probability;
      const bool live = HasItem(m, static_cast<ItemId>(j));
      outcome[random_edges[j]] = live ? kLive : kBlocked;
      q *= live ? p : 1.0 - p;
    }
    Realization phi(g.node_count());
    for (int u = 0; u < g.node_count(); ++u) {
      std::vector<std::uint8_t> view = NodeView(g, outcome, u);
      auto [it, inserted] =
          interned.emplace(view, static_cast<StateId>(ic.views.size()));
      if (inserted) {
        std::vector<int> heads;
        for (int id = 0; id < g.edge_count(); ++id) {
          if (view[id] == kLive) heads.push_back(g.edge(id).to);
        }
        ic.views.push_back(std::move(view));
        ic.reached.push_back(std::move(heads));
      }
      phi[u] = it->second;
    }
    support.push_back({std::move(phi), q});
    ic.outcomes.push_back(std::move(outcome));
  }

  auto reached =
      std::make_shared<const std::vector<std::vector<int>>>(ic.reached);
  if (!system) system = MakeCardinality(g.node_count(), g.node_count());
  ic.instance = std::make_shared<const Instance>(
      g.node_count(), std::max<int>(1, ic.views.size()),
      Prior(std::move(support)),
      std::make_shared<IcUtility>(g.node_count(), std::move(reached)),
      std::move(system));
  return ic;
}

// ---------------------------------------------------------------------------

namespace {

// Largest nodes x worlds product for which reach sets are precomputed.
constexpr std::size_t kReachCacheBudget = 4'000'000;

}  // namespace

CascadeWorlds::CascadeWorlds(const Graph& g, int count, std::uint64_t seed)
    : graph_(&g),
      count_(count),
      words_((static_cast<std::size_t>(g.edge_count()) + 63) / 64) {
  if (count < 1) {
    throw Error(ErrorCode::kInvalidParameter, "need at least one world");
  }
  bits_.assign(words_ * count_, 0);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int w = 0; w < count_; ++w) {
    for (int id = 0; id < g.edge_count(); ++id) {
      if (unit(rng) < g.edge(id).probability) {
        bits_[w * words_ + id / 64] |= std::uint64_t{1} << (id % 64);
      }
    }
  }
  const std::size_t cells =
      static_cast<std::size_t>(count_) * g.node_count();
  if (cells <= kReachCacheBudget) {
    reach_.reserve(cells);
    for (int w = 0; w < count_; ++w) {
      for (int u = 0; u < g.node_count(); ++u) reach_.push_back(Reach(w, u));
    }
    upstream_.assign(g.node_count(), {});
    reach_total_.assign(g.node_count(), 0);
    for (std::size_t cell = 0; cell < cells; ++cell) {
      const int w = static_cast<int>(cell / g.node_count());
      const int u = static_cast<int>(cell % g.node_count());
      reach_total_[u] += reach_[cell].size();
      for (int v : reach_[cell]) {
        if (v != u) upstream_[v].emplace_back(w, u);
      }
    }
    cached_ = true;
  }
}

std::vector<int> CascadeWorlds::Reach(int w, int node,
                                      const std::vector<char>* blocked) const {
  const Graph& g = *graph_;
  std::vector<int> order{node};
  // Most cascades stay tiny, so a linear scan is used until the reach grows
  // large enough to warrant a node-sized bitmap.
  constexpr std::size_t kScanLimit = 32;
  std::vector<char> bitmap;
  auto visit = [&](int v) {
    if (bitmap.empty()) {
      if (std::find(order.begin(), order.end(), v) != order.end()) return;
      order.push_back(v);
      if (order.size() > kScanLimit) {
        bitmap.assign(g.node_count(), 0);
        for (int x : order) bitmap[x] = 1;
      }
    } else if (!bitmap[v]) {
      bitmap[v] = 1;
      order.push_back(v);
    }
  };
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (int id : g.out_edges(order[i])) {
      if (!Live(w, id)) continue;
      const int to = g.edge(id).to;
      if (blocked && (*blocked)[to]) continue;
      visit(to);
    }
  }
  return order;
}

double CascadeWorlds::Gain(const std::vector<char>& active, int e) const {
  if (active[e]) return 0.0;
  std::size_t total = 0;
  for (int w = 0; w < count_; ++w) {
    if (cached_) {
      const std::vector<int>& r =
          reach_[static_cast<std::size_t>(w) * graph_->node_count() + e];
      bool touches = false;
      for (int v : r) {
        if (active[v]) {
          touches = true;
          break;
        }
      }
      total += touches ? Reach(w, e, &active).size() : r.size();
    } else {
      total += Reach(w, e, &active).size();
    }
  }
  return static_cast<double>(total) / count_;
}

std::vector<double> CascadeWorlds::Gains(
    const std::vector<char>& active) const {
  const int n = graph_->node_count();
  std::vector<double> out(n, 0.0);
  if (!cached_) {
    for (int e = 0; e < n; ++e) out[e] = Gain(active, e);
    return out;
  }
  // Start from the unconditioned totals and redo only the cascades that run
  // into an active node.
  std::vector<std::size_t> total = reach_total_;
  std::vector<int> active_nodes;
  for (int v = 0; v < n; ++v) {
    if (active[v]) active_nodes.push_back(v);
  }
  std::vector<int> seen(n, -1);
  std::vector<int> queue;
  int visit = 0;
  // Nodes reached from u in world w without entering an active node.
  auto reach_count = [&](int w, int u) {
    ++visit;
    queue.assign(1, u);
    seen[u] = visit;
    for (std::size_t i = 0; i < queue.size(); ++i) {
      for (int id : graph_->out_edges(queue[i])) {
        const int to = graph_->edge(id).to;
        if (!Live(w, id) || active[to] || seen[to] == visit) continue;
        seen[to] = visit;
        queue.push_back(to);
      }
    }
    return queue.size();
  };
  // Walk the upstream lists of the active nodes in world order; each list is
  // already sorted by world.
  std::vector<std::size_t> pos(active_nodes.size(), 0);
  std::vector<int> stamp(n, -1);
  for (;;) {
    int w = count_;
    for (std::size_t i = 0; i < active_nodes.size(); ++i) {
      const auto& list = upstream_[active_nodes[i]];
      if (pos[i] < list.size()) w = std::min(w, list[pos[i]].first);
    }
    if (w == count_) break;
    const std::size_t row = static_cast<std::size_t>(w) * n;
    for (std::size_t i = 0; i < active_nodes.size(); ++i) {
      const auto& list = upstream_[active_nodes[i]];
      for (; pos[i] < list.size() && list[pos[i]].first == w; ++pos[i]) {
        const int u = list[pos[i]].second;
        if (active[u] || stamp[u] == w) continue;
        stamp[u] = w;
        total[u] -= reach_[row + u].size();
        total[u] += reach_count(w, u);
      }
    }
  }
  for (int e = 0; e < n; ++e) {
    if (!active[e]) out[e] = static_cast<double>(total[e]) / count_;
  }
  return out;
}

double CascadeWorlds::UnconditionedGain(const ItemSet& selected, int e) const {
  if (selected.Contains(e)) return 0.0;
  const std::vector<ItemId> seeds = selected.Items();
  std::size_t total = 0;
  std::vector<char> active(graph_->node_count(), 0);
  for (int w = 0; w < count_; ++w) {
    std::fill(active.begin(), active.end(), 0);
    for (ItemId s : seeds) {
      for (int v : Reach(w, s)) active[v] = 1;
    }
    if (!active[e]) total += Reach(w, e, &active).size();
  }
  return static_cast<double>(total) / count_;
}

CascadeMarginalEstimator::CascadeMarginalEstimator(const IcInstance& ic,
                                                   int trials,
                                                   std::uint64_t seed)
    : ic_(ic), worlds_(ic.graph, trials, seed) {}

double CascadeMarginalEstimator::Estimate(const PartialRealization& psi,
                                          ItemId e) const {
  std::vector<char> active(ic_.graph.node_count(), 0);
  for (const Observation& o : psi.observations()) {
    active[o.item] = 1;
    for (int v : ic_.reached.at(o.state)) active[v] = 1;
  }
  return worlds_.Gain(active, e);
}

double CascadeMarginalEstimator::EstimateUnconditioned(const ItemSet& selected,
                                                       ItemId e) const {
  return worlds_.UnconditionedGain(selected, e);
}

// ---------------------------------------------------------------------------

Counterexample CounterexampleInstance() {
  enum { a, b, c, d, e, f, g };
  Graph graph(7);
  graph.AddEdge(a, b, 1.0);
  const int bc = graph.AddEdge(b, c, 0.1);
  graph.AddEdge(d, e, 1.0);
  graph.AddEdge(e, f, 1.0);
  graph.AddEdge(f, g, 1.0);
  IcInstance ic = MaterializeIc(graph, MakeCardinality(7, 7));

  EdgeOutcome live_world;
  EdgeOutcome blocked_world;
  for (const EdgeOutcome& o : ic.outcomes) {
    (o[bc] == kLive ? live_world : blocked_world) = o;
  }
  const StateId a_live = *ic.StateOf(live_world, a);
  const StateId a_blocked = *ic.StateOf(blocked_world, a);
  const StateId b_live = *ic.StateOf(live_world, b);

  Policy pi;
  const int root = pi.AddNode(a);
  const int then_d = pi.AddNode(d);
  pi.SetRoot(root);
  pi.SetChild(root, a_live, then_d);
  pi.SetChild(root, a_blocked, Policy::kStop);
  pi.SetDefault(then_d, Policy::kStop);

  return Counterexample{std::move(ic), PartialRealization{},
                        PartialRealization{{b, b_live}}, std::move(pi)};
}

}  // namespace asgap
