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


#include "asgap/fixtures.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>

#include "asgap/exact_model.h"

namespace asgap {

namespace {

double Uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

int UniformInt(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

std::vector<double> RandomSimplex(std::mt19937_64& rng, int size) {
  std::vector<double> p(size);
  for (double& x : p) x = Uniform(rng, 0.05, 1.0);
  const double total = std::accumulate(p.begin(), p.end(), 0.0);
  for (double& x : p) x /= total;
  return p;
}

// f = offset + g(weight) - cost * |S|.
class ConcaveOfModularUtility : public UtilityFunction {
 public:
  ConcaveOfModularUtility(std::vector<std::vector<double>> weights,
                          int curve, double scale, double offset, double cost)
      : weights_(std::move(weights)),
        curve_(curve),
        scale_(scale),
        offset_(offset),
        cost_(cost) {}

  double Evaluate(const ItemSet& s, const Realization& phi) const override {
    double x = 0.0;
    int size = 0;
    for (ItemId e : s.Items()) {
      x += weights_[e][phi[e]];
      ++size;
    }
    return offset_ + scale_ * Curve(x) - cost_ * size;
  }

 private:
  double Curve(double x) const {
    switch (curve_) {
      case 0:
        return std::sqrt(x);
      case 1:
        return std::log1p(x);
      case 2:
        return std::min(x, 1.0);
      default:
        return x;
    }
  }

  std::vector<std::vector<double>> weights_;
  int curve_;
  double scale_;
  double offset_;
  double cost_;
};

}  // namespace

Prior ProductPrior(const std::vector<std::vector<double>>& marginals) {
  std::vector<WeightedRealization> support{{{}, 1.0}};
  for (const std::vector<double>& dist : marginals) {
    std::vector<WeightedRealization> next;
    for (const WeightedRealization& w : support) {
      for (StateId o = 0; o < static_cast<StateId>(dist.size()); ++o) {
        if (dist[o] <= 0.0) continue;
        WeightedRealization x = w;
        x.states.push_back(o);
        x.probability *= dist[o];
        next.push_back(std::move(x));
      }
    }
    support = std::move(next);
  }
  // Renormalize to absorb rounding in the products.
  double total = 0.0;
  for (const WeightedRealization& w : support) total += w.probability;
  for (WeightedRealization& w : support) w.probability /= total;
  return Prior(std::move(support));
}

Instance RandomIndependentInstance(std::mt19937_64& rng,
                                   const IndependentFixtureOptions& options,
                                   SystemPtr system) {
  const int n = system ? system->ground_size()
                       : UniformInt(rng, options.min_items, options.max_items);
  const int states = UniformInt(rng, 1, options.max_states);
  std::vector<std::vector<double>> marginals(n);
  std::vector<std::vector<double>> weights(n);
  for (int e = 0; e < n; ++e) {
    marginals[e] = RandomSimplex(rng, states);
    weights[e].resize(states);
    for (double& w : weights[e]) {
      // Some zero weights make ties and flat marginals common.
      w = UniformInt(rng, 0, 4) == 0 ? 0.0 : Uniform(rng, 0.0, 2.0);
    }
  }
  const int curve = UniformInt(rng, 0, 3);
  const double scale = Uniform(rng, 0.5, 2.0);
  double offset = 0.0;
  double cost = 0.0;
  if (options.allow_negative) {
    offset = Uniform(rng, -1.0, 1.0);
    cost = UniformInt(rng, 0, 1) == 0 ? 0.0 : Uniform(rng, 0.0, 0.6);
  }
  if (!system) system = RandomSystem(rng, n);
  return Instance(n, states, ProductPrior(marginals),
                  std::make_shared<ConcaveOfModularUtility>(
                      std::move(weights), curve, scale, offset, cost),
                  std::move(system));
}

Instance RandomCorrelatedInstance(std::mt19937_64& rng, int n, int states,
                                  SystemPtr system) {
  int total = 1;
  for (int e = 0; e < n; ++e) total *= states;
  std::vector<int> codes(total);
  std::iota(codes.begin(), codes.end(), 0);
  std::shuffle(codes.begin(), codes.end(), rng);
  const int keep = UniformInt(rng, 1, std::min(total, 6));
  codes.resize(keep);
  std::sort(codes.begin(), codes.end());

  std::vector<double> mass = RandomSimplex(rng, keep);
  std::vector<WeightedRealization> support;
  std::vector<Realization> realizations;
  for (int j = 0; j < keep; ++j) {
    Realization phi(n);
    int code = codes[j];
    for (int e = 0; e < n; ++e) {
      phi[e] = code % states;
      code /= states;
    }
    support.push_back({phi, mass[j]});
    realizations.push_back(phi);
  }
  std::map<ItemSet, std::vector<double>> table;
  for (Mask m = 0; m < (Mask{1} << n); ++m) {
    std::vector<double> row(keep);
    for (double& v : row) v = Uniform(rng, -1.0, 3.0);
    table.emplace(ItemSet::FromMask(m), std::move(row));
  }
  if (!system) system = RandomSystem(rng, n);
  return Instance(n, states, Prior(std::move(support)),
                  std::make_shared<TableUtility>(std::move(realizations),
                                                 std::move(table)),
                  std::move(system));
}

SystemPtr RandomSystem(std::mt19937_64& rng, int n) {
  switch (UniformInt(rng, 0, 3)) {
    case 0:
      return MakeCardinality(n, UniformInt(rng, 0, n));
    case 1: {
      std::vector<double> costs(n);
      for (double& c : costs) c = Uniform(rng, 0.5, 2.0);
      return MakeKnapsack(std::move(costs), Uniform(rng, 0.0, 1.5 * n));
    }
    case 2: {
      const int block_count = n == 0 ? 0 : UniformInt(rng, 1, n);
      std::vector<std::vector<ItemId>> blocks(block_count);
      for (ItemId e = 0; e < n; ++e) {
        // Keep every block non-empty by seeding the first ones in order.
        int b = e < block_count ? e : UniformInt(rng, 0, block_count - 1);
        blocks[b].push_back(e);
      }
      std::vector<int> limits(block_count);
      for (int b = 0; b < block_count; ++b) {
        limits[b] = UniformInt(rng, 0, static_cast<int>(blocks[b].size()));
      }
      return MakePartition(n, std::move(blocks), std::move(limits));
    }
    default: {
      std::vector<ItemSet> generators;
      const int count = UniformInt(rng, 0, 3);
      for (int g = 0; g < count; ++g) {
        generators.push_back(ItemSet::FromMask(
            std::uniform_int_distribution<Mask>(0, (Mask{1} << n) - 1)(rng)));
      }
      return ExplicitSystem::GeneratedBy(n, generators);
    }
  }
}

std::vector<SystemPtr> SystemZoo(std::mt19937_64& rng, int n) {
  std::vector<SystemPtr> zoo;
  for (int k = 0; k <= n; ++k) zoo.push_back(MakeCardinality(n, k));
  for (int i = 0; i < 4; ++i) {
    std::vector<double> costs(n);
    for (double& c : costs) c = Uniform(rng, 0.5, 2.0);
    zoo.push_back(MakeKnapsack(std::move(costs), Uniform(rng, 0.0, 1.2 * n)));
  }
  for (int i = 0; i < 6; ++i) zoo.push_back(RandomSystem(rng, n));
  return zoo;
}

}  // namespace asgap
