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


#include "asgap/experiment.h"

#include <algorithm>
#include <atomic>
#include <bit>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "asgap/sampling_gap.h"
#include "asgap/solvers.h"

namespace asgap {

namespace {

constexpr char kHeader[] = "algorithm,rate,sample,subset_size,utility,mode,wall_ms";

std::uint64_t SplitMix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::uint64_t Derive(std::uint64_t master, std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = SplitMix(master);
  for (std::uint64_t p : parts) h = SplitMix(h ^ p);
  return h;
}

std::uint64_t RateKey(double r) { return std::bit_cast<std::uint64_t>(r); }

// Stable stream tags so one algorithm's draws never depend on which other
// algorithms are configured.
enum : std::uint64_t {
  kGroundTag = 1,
  kAlgorithmTag = 2,
  kWorldsTag = 3,
  kEvaluationTag = 4,
};

std::uint64_t AlgorithmCode(Algorithm a) {
  return static_cast<std::uint64_t>(a) + 1;
}

[[noreturn]] void BadConfig(const std::string& what) {
  throw Error(ErrorCode::kInvalidParameter, "config: " + what);
}

// One (rate, sample) job: the shared ground subset and per-algorithm output.
struct Job {
  std::size_t rate_index = 0;
  int sample = 0;
  std::vector<std::optional<ResultRow>> rows;
  std::vector<std::optional<RowError>> errors;
};

class Runner {
 public:
  Runner(const ExperimentConfig& cfg, const LoadedInstance& li, bool exact)
      : cfg_(cfg), li_(li), exact_(exact) {
    k_ = cfg.k.value_or(li.k);
    if (exact_) {
      const Instance& inst = li.Require();
      if (li.active_learning) {
        estimator_ = std::make_unique<GbsMarginalEstimator>(li.active_learning);
      } else {
        estimator_ = std::make_unique<ExactMarginalEstimator>(inst);
      }
    } else {
      worlds_ = std::make_unique<CascadeWorlds>(
          *li.graph, cfg.trials, Derive(cfg.seed, {kWorldsTag}));
    }
  }

  int n() const {
    return exact_ ? li_.Require().n : li_.graph->node_count();
  }

  void Run(Job& job) const {
    const double rate = cfg_.rates[job.rate_index];
    std::mt19937_64 rng(
        Derive(cfg_.seed, {kGroundTag, RateKey(rate),
                           static_cast<std::uint64_t>(job.sample)}));
    const ItemSet ground = SampleDistribution::Bernoulli(n(), rate).Sample(rng);
    const auto restricted = Restrict(li_.system, ItemSet{}, ground);
    job.rows.resize(cfg_.algorithms.size());
    job.errors.resize(cfg_.algorithms.size());
    for (std::size_t a = 0; a < cfg_.algorithms.size(); ++a) {
      const Algorithm alg = cfg_.algorithms[a];
      const std::uint64_t alg_seed =
          Derive(cfg_.seed, {kAlgorithmTag, RateKey(rate),
                             static_cast<std::uint64_t>(job.sample),
                             AlgorithmCode(alg)});
      const auto start = std::chrono::steady_clock::now();
      try {
        const double utility =
            exact_ ? ExactValue(alg, *restricted, alg_seed)
                   : MonteCarloValue(alg, *restricted, ground, rate,
                                     job.sample, alg_seed);
        const auto stop = std::chrono::steady_clock::now();
        ResultRow row{AlgorithmName(alg), rate, job.sample, ground.Size(),
                      utility, exact_ ? "exact" : "mc", 0.0};
        if (cfg_.record_wall_time) {
          row.wall_ms =
              std::chrono::duration<double, std::milli>(stop - start).count();
        }
        job.rows[a] = row;
      } catch (const Error& e) {
        job.errors[a] = RowError{AlgorithmName(alg), rate, job.sample, e.what()};
      }
    }
  }

 private:
  double ExactValue(Algorithm alg, const IndependenceSystem& sys,
                    std::uint64_t seed) const {
    const Instance& inst = li_.Require();
    Policy pi;
    switch (alg) {
      case Algorithm::kAdaptiveGreedy:
        pi = AdaptiveGreedy(inst, sys, *estimator_);
        break;
      case Algorithm::kNonadaptiveGreedy:
        pi = NonadaptiveGreedy(inst, sys, *estimator_);
        break;
      case Algorithm::kRandom:
        pi = RandomPolicy(inst, sys, k_, seed);
        break;
    }
    return ExpectedUtility(inst, pi);
  }

  EdgeOutcome DrawOutcome(std::mt19937_64& rng) const {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const Graph& g = *li_.graph;
    EdgeOutcome out(g.edge_count(), kBlocked);
    for (int id = 0; id < g.edge_count(); ++id) {
      if (unit(rng) < g.edge(id).probability) out[id] = kLive;
    }
    return out;
  }

  // Highest estimated gain among feasible items of the ground subset; ties
  // go to the lowest item. Returns -1 when nothing is feasible.
  template <typename GainFn>
  int Pick(const IndependenceSystem& sys, const ItemSet& ground,
           const ItemSet& selected, GainFn gain) const {
    int best = -1;
    double best_gain = 0.0;
    for (ItemId e : ground.Items()) {
      if (selected.Contains(e) || !sys.Contains(selected.With(e))) continue;
      const double g = gain(e);
      if (best < 0 || g > best_gain) {
        best = e;
        best_gain = g;
      }
    }
    return best;
  }

  double MonteCarloValue(Algorithm alg, const IndependenceSystem& sys,
                         const ItemSet& ground, double rate, int sample,
                         std::uint64_t seed) const {
    const Graph& g = *li_.graph;
    std::vector<int> fixed;
    if (alg == Algorithm::kNonadaptiveGreedy) {
      ItemSet chosen;
      for (;;) {
        const int e = Pick(sys, ground, chosen, [&](ItemId x) {
          return worlds_->UnconditionedGain(chosen, x);
        });
        if (e < 0) break;
        chosen.Insert(e);
      }
      fixed = chosen.Items();
    } else if (alg == Algorithm::kRandom) {
      fixed = RandomFeasibleSet(sys, k_, seed).Items();
    }

    // Adaptive choices depend only on what is active and what is selected,
    // so they are shared across evaluation cascades.
    std::unordered_map<std::string, int> memo;
    double total = 0.0;
    for (int j = 0; j < cfg_.evaluation_realizations; ++j) {
      std::mt19937_64 rng(Derive(cfg_.seed,
                                 {kEvaluationTag, RateKey(rate),
                                  static_cast<std::uint64_t>(sample),
                                  static_cast<std::uint64_t>(j)}));
      const EdgeOutcome outcome = DrawOutcome(rng);
      if (alg != Algorithm::kAdaptiveGreedy) {
        total += static_cast<double>(LiveReachable(g, fixed, outcome).size());
        continue;
      }
      std::vector<char> active(g.node_count(), 0);
      ItemSet selected;
      std::size_t count = 0;
      for (;;) {
        std::string key(active.begin(), active.end());
        key += '|';
        key += selected.Key();
        auto it = memo.find(key);
        if (it == memo.end()) {
          const std::vector<double> gains = worlds_->Gains(active);
          const int e = Pick(sys, ground, selected,
                             [&](ItemId x) { return gains[x]; });
          it = memo.emplace(std::move(key), e).first;
        }
        const int e = it->second;
        if (e < 0) break;
        selected.Insert(e);
        for (int v : LiveReachable(g, {e}, outcome)) {
          if (!active[v]) {
            active[v] = 1;
            ++count;
          }
        }
      }
      total += static_cast<double>(count);
    }
    return total / cfg_.evaluation_realizations;
  }

  const ExperimentConfig& cfg_;
  const LoadedInstance& li_;
  bool exact_;
  int k_ = 0;
  std::unique_ptr<MarginalEstimator> estimator_;
  std::unique_ptr<CascadeWorlds> worlds_;
};

std::vector<std::string> SplitCsv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream in(line);
  std::string cell;
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double ParseNumber(const std::string& s, int line) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(ErrorCode::kParse,
                "line " + std::to_string(line) + ": bad number '" + s + "'");
  }
  return v;
}

}  // namespace

std::string AlgorithmName(Algorithm a) {
  switch (a) {
    case Algorithm::kAdaptiveGreedy:
      return "AG";
    case Algorithm::kNonadaptiveGreedy:
      return "NG";
    case Algorithm::kRandom:
      return "RDM";
  }
  return "?";
}

Algorithm AlgorithmFromName(const std::string& name) {
  if (name == "AG") return Algorithm::kAdaptiveGreedy;
  if (name == "NG") return Algorithm::kNonadaptiveGreedy;
  if (name == "RDM") return Algorithm::kRandom;
  BadConfig("unknown algorithm '" + name + "'");
}

void ExperimentConfig::Validate() const {
  if (algorithms.empty()) BadConfig("no algorithms");
  if (rates.empty()) BadConfig("no rates");
  for (double r : rates) {
    if (!(r > 0.0 && r <= 1.0)) BadConfig("rates must lie in (0, 1]");
  }
  if (samples_per_rate < 1) BadConfig("samples_per_rate must be >= 1");
  if (trials < 1) BadConfig("trials must be >= 1");
  if (evaluation_realizations < 1) {
    BadConfig("evaluation_realizations must be >= 1");
  }
  if (k && *k < 0) BadConfig("k must be >= 0");
  if (instance.is_null()) BadConfig("no instance");
}

ExperimentConfig ConfigFromJson(const Json& j, const std::string& base_dir) {
  if (!j.is_object()) BadConfig("must be an object");
  ExperimentConfig cfg;
  cfg.base_dir = base_dir;
  try {
    for (auto it = j.begin(); it != j.end(); ++it) {
      const std::string& key = it.key();
      const Json& v = it.value();
      if (key == "instance") {
        cfg.instance = v.is_string() ? Json{{"file", v}} : v;
      } else if (key == "algorithms") {
        cfg.algorithms.clear();
        for (const Json& a : v) cfg.algorithms.push_back(AlgorithmFromName(a));
      } else if (key == "rates") {
        cfg.rates = v.get<std::vector<double>>();
      } else if (key == "samples_per_rate") {
        cfg.samples_per_rate = v.get<int>();
      } else if (key == "trials") {
        cfg.trials = v.get<int>();
      } else if (key == "evaluation_realizations") {
        cfg.evaluation_realizations = v.get<int>();
      } else if (key == "k") {
        cfg.k = v.get<int>();
      } else if (key == "seed") {
        cfg.seed = v.get<std::uint64_t>();
      } else if (key == "mode") {
        const std::string m = v.get<std::string>();
        if (m == "auto") {
          cfg.mode = ExperimentMode::kAuto;
        } else if (m == "exact") {
          cfg.mode = ExperimentMode::kExact;
        } else if (m == "mc") {
          cfg.mode = ExperimentMode::kMonteCarlo;
        } else {
          BadConfig("mode must be auto, exact or mc");
        }
      } else if (key == "record_wall_time") {
        cfg.record_wall_time = v.get<bool>();
      } else if (key == "edge_prob") {
        cfg.edge_probability = v.get<double>();
      } else {
        BadConfig("unknown key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    BadConfig(e.what());
  }
  cfg.Validate();
  return cfg;
}

ExperimentConfig LoadConfigFile(const std::string& path) {
  std::string dir = std::filesystem::path(path).parent_path().string();
  return ConfigFromJson(ReadJsonFile(path), dir.empty() ? "." : dir);
}

int DefaultWorkerCount() {
  if (const char* env = std::getenv("ASGAP_WORKERS")) {
    const int w = std::atoi(env);
    if (w >= 1) return w;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

ExperimentResult RunExperiment(const ExperimentConfig& cfg, int workers) {
  cfg.Validate();
  LoadOptions options;
  options.base_dir = cfg.base_dir;
  options.edge_probability = cfg.edge_probability;
  LoadedInstance li;
  if (cfg.instance.is_object() && cfg.instance.contains("file")) {
    std::filesystem::path path = cfg.instance.at("file").get<std::string>();
    if (path.is_relative()) path = cfg.base_dir / path;
    options.base_dir = ".";
    li = LoadInstanceFile(path.string(), options);
  } else {
    li = InstanceFromJson(cfg.instance, options);
  }
  if (cfg.k && li.graph && !cfg.instance.contains("system")) {
    li.system = MakeCardinality(li.graph->node_count(), *cfg.k);
  }

  bool exact = li.instance != nullptr;
  if (cfg.mode == ExperimentMode::kExact) {
    li.Require();
    exact = true;
  } else if (cfg.mode == ExperimentMode::kMonteCarlo) {
    if (!li.graph) {
      BadConfig("Monte-Carlo mode needs a cascade instance");
    }
    exact = false;
  }
  if (exact && li.instance && li.instance->system != li.system) {
    li.instance = std::make_shared<Instance>(
        li.instance->n, li.instance->state_count, li.instance->prior,
        li.instance->utility, li.system);
  }

  const Runner runner(cfg, li, exact);
  std::vector<Job> jobs;
  for (std::size_t r = 0; r < cfg.rates.size(); ++r) {
    for (int s = 0; s < cfg.samples_per_rate; ++s) {
      jobs.push_back(Job{r, s, {}, {}});
    }
  }

  if (workers <= 0) workers = DefaultWorkerCount();
  workers = std::min<int>(workers, static_cast<int>(jobs.size()));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto work = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      try {
        runner.Run(jobs[i]);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  ExperimentResult result;
  result.mode = exact ? "exact" : "mc";
  result.instance_kind = li.kind;
  result.node_labels = li.node_labels;
  for (const Job& job : jobs) {
    for (const auto& row : job.rows) {
      if (row) result.rows.push_back(*row);
    }
    for (const auto& err : job.errors) {
      if (err) result.errors.push_back(*err);
    }
  }
  std::sort(result.rows.begin(), result.rows.end(),
            [](const ResultRow& a, const ResultRow& b) {
              return std::tie(a.algorithm, a.rate, a.sample) <
                     std::tie(b.algorithm, b.rate, b.sample);
            });
  result.summary = Summarize(result.rows);
  for (Algorithm a : cfg.algorithms) {
    for (double r : cfg.rates) {
      const bool present = std::any_of(
          result.summary.begin(), result.summary.end(),
          [&](const SummaryRow& s) {
            return s.algorithm == AlgorithmName(a) && s.rate == r;
          });
      if (!present) {
        result.warnings.push_back("no rows for " + AlgorithmName(a) +
                                  " at rate " + FormatDouble(r) +
                                  "; group omitted from the summary");
      }
    }
  }
  return result;
}

std::vector<SummaryRow> Summarize(const std::vector<ResultRow>& rows) {
  std::map<std::pair<std::string, double>, std::vector<double>> groups;
  for (const ResultRow& r : rows) groups[{r.algorithm, r.rate}].push_back(r.utility);
  std::vector<SummaryRow> out;
  for (const auto& [key, values] : groups) {
    SummaryRow s;
    s.algorithm = key.first;
    s.rate = key.second;
    s.count = static_cast<int>(values.size());
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / s.count;
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    if (s.count == 1) {
      s.degenerate = true;
    } else if (*lo == *hi) {
      s.mean = *lo;
    } else {
      double sq = 0.0;
      for (double v : values) sq += (v - s.mean) * (v - s.mean);
      s.stddev = std::sqrt(sq / (s.count - 1));
      s.ci_half_width = 1.96 * s.stddev / std::sqrt(static_cast<double>(s.count));
    }
    out.push_back(s);
  }
  return out;
}

std::string FormatDouble(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

std::string WriteResultsCsv(const ExperimentResult& result,
                            const ExperimentConfig& cfg) {
  std::ostringstream out;
  out << "# asgap experiment\n";
  out << "# mode=" << result.mode << "\n";
  out << "# instance=" << result.instance_kind << "\n";
  out << "# seed=" << cfg.seed << "\n";
  out << "# samples_per_rate=" << cfg.samples_per_rate << "\n";
  if (result.mode == "mc") {
    out << "# trials=" << cfg.trials << "\n";
    out << "# evaluation_realizations=" << cfg.evaluation_realizations << "\n";
  }
  for (const RowError& e : result.errors) {
    out << "# error " << e.algorithm << " rate=" << FormatDouble(e.rate)
        << " sample=" << e.sample << ": " << e.message << "\n";
  }
  out << kHeader << "\n";
  for (const ResultRow& r : result.rows) {
    out << r.algorithm << ',' << FormatDouble(r.rate) << ',' << r.sample << ','
        << r.subset_size << ',' << FormatDouble(r.utility) << ',' << r.mode
        << ',' << FormatDouble(r.wall_ms) << "\n";
  }
  return out.str();
}

std::string WriteSummaryCsv(const std::vector<SummaryRow>& summary) {
  std::ostringstream out;
  out << "algorithm,rate,n,mean,stddev,ci_half_width,degenerate\n";
  for (const SummaryRow& s : summary) {
    out << s.algorithm << ',' << FormatDouble(s.rate) << ',' << s.count << ','
        << FormatDouble(s.mean) << ',' << FormatDouble(s.stddev) << ','
        << FormatDouble(s.ci_half_width) << ',' << (s.degenerate ? 1 : 0)
        << "\n";
  }
  return out.str();
}

ParsedCsv ParseResultsCsv(const std::string& text) {
  ParsedCsv parsed;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!header && !line.empty() && line[0] == '#') {
      const auto eq = line.find('=');
      if (eq != std::string::npos && line.find(' ', 2) > eq) {
        parsed.metadata[line.substr(2, eq - 2)] = line.substr(eq + 1);
      }
      continue;
    }
    if (!header) {
      if (line != kHeader) {
        throw Error(ErrorCode::kParse, "line " + std::to_string(number) +
                                           ": expected header '" + kHeader +
                                           "'");
      }
      header = true;
      continue;
    }
    if (line.empty()) continue;
    const std::vector<std::string> cells = SplitCsv(line);
    if (cells.size() != 7) {
      throw Error(ErrorCode::kParse, "line " + std::to_string(number) +
                                         ": expected 7 columns");
    }
    ResultRow r;
    r.algorithm = cells[0];
    r.rate = ParseNumber(cells[1], number);
    r.sample = static_cast<int>(ParseNumber(cells[2], number));
    r.subset_size = static_cast<int>(ParseNumber(cells[3], number));
    r.utility = ParseNumber(cells[4], number);
    r.mode = cells[5];
    r.wall_ms = ParseNumber(cells[6], number);
    if (!std::isfinite(r.utility)) {
      throw Error(ErrorCode::kParse,
                  "line " + std::to_string(number) + ": utility not finite");
    }
    parsed.rows.push_back(r);
  }
  if (!header) throw Error(ErrorCode::kParse, "missing CSV header");
  return parsed;
}

std::string SummaryPathFor(const std::string& results_path) {
  std::filesystem::path p(results_path);
  p.replace_extension();
  return p.string() + ".summary.csv";
}

}  // namespace asgap
