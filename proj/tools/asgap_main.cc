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


// Command-line entry point: experiment sweeps, class checks, sampling gaps
// and the verification suites.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "asgap/checkers.h"
#include "asgap/experiment.h"
#include "asgap/instance_io.h"
#include "asgap/sampling_gap.h"
#include "asgap/verify.h"

namespace {

using namespace asgap;

constexpr int kExitFailure = 1;
constexpr int kExitError = 2;

struct InstanceArgs {
  std::string instance;
  std::string edge_list;
  double edge_prob = kDefaultEdgeProbability;
  int k = -1;
};

void AddInstanceOptions(CLI::App* cmd, InstanceArgs& args) {
  auto* inst = cmd->add_option("--instance", args.instance,
                               "instance file (JSON)");
  auto* edges = cmd->add_option("--edge-list", args.edge_list,
                                "edge list \"u v [p]\" per line");
  inst->excludes(edges);
  cmd->add_option("--edge-prob", args.edge_prob,
                  "probability for edges without one")
      ->capture_default_str();
  cmd->add_option("--k", args.k, "seed budget for edge-list instances");
}

LoadedInstance Load(const InstanceArgs& args) {
  LoadOptions options;
  options.edge_probability = args.edge_prob;
  if (!args.edge_list.empty()) {
    Json j = {{"kind", "ic"},
              {"edge_list", std::filesystem::absolute(args.edge_list).string()},
              {"edge_prob", args.edge_prob}};
    if (args.k >= 0) j["k"] = args.k;
    return InstanceFromJson(j, options);
  }
  if (args.instance.empty()) {
    throw Error(ErrorCode::kInvalidParameter,
                "one of --instance or --edge-list is required");
  }
  LoadedInstance li = LoadInstanceFile(args.instance, options);
  return li;
}

void WriteFile(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kInvalidParameter, "cannot write " + path);
  out << text;
}

int RunCommand(const std::string& config_path, const std::string& out_path,
               int workers, std::optional<double> edge_prob) {
  ExperimentConfig cfg = LoadConfigFile(config_path);
  if (edge_prob) cfg.edge_probability = *edge_prob;
  const ExperimentResult result = RunExperiment(cfg, workers);
  WriteFile(out_path, WriteResultsCsv(result, cfg));
  const std::string summary_path = SummaryPathFor(out_path);
  WriteFile(summary_path, WriteSummaryCsv(result.summary));
  if (!result.node_labels.empty()) {
    std::filesystem::path map_path(out_path);
    map_path.replace_extension();
    std::ofstream ids(map_path.string() + ".idmap.txt");
    WriteIdMap(LabeledGraph{Graph(), result.node_labels}, ids);
  }
  for (const RowError& e : result.errors) {
    std::cerr << "row error: " << e.algorithm << " rate "
              << FormatDouble(e.rate) << " sample " << e.sample << ": "
              << e.message << "\n";
  }
  for (const std::string& w : result.warnings) std::cerr << "warning: " << w << "\n";
  std::cout << "wrote " << result.rows.size() << " rows (" << result.mode
            << " mode) to " << out_path << " and " << summary_path << "\n";
  return 0;
}

int CheckCommand(const InstanceArgs& args, const std::string& cls) {
  const LoadedInstance loaded = Load(args);
  const Instance& inst = loaded.Require();
  CheckReport report;
  if (cls == "adaptive") {
    report = CheckAdaptive(inst);
  } else if (cls == "policy-adaptive") {
    report = CheckPolicyAdaptive(inst);
  } else {
    report = CheckPolicywise(inst);
  }
  std::cout << cls << ": " << DescribeReport(report) << "\n";
  if (report.witness && report.witness->policy) {
    std::cout << "witness policy: " << PolicyToJson(*report.witness->policy)
              << "\n";
  }
  return report.holds ? 0 : kExitFailure;
}

int GapCommand(const InstanceArgs& args, double rate, bool exact, int trials,
               std::uint64_t seed) {
  const LoadedInstance loaded = Load(args);
  const Instance& inst = loaded.Require();
  const auto dist = SampleDistribution::Bernoulli(inst.n, rate);
  const EvaluationMode mode =
      exact ? EvaluationMode::Exact() : EvaluationMode::MonteCarlo(trials, seed);
  const GapReport g = SamplingGap(inst, dist, mode);
  Json j = {{"rate", g.rate},
            {"full_value", g.full_value},
            {"expected_sampled_value", g.expected_sampled_value},
            {"std_error", g.std_error},
            {"gap", g.gap ? Json(*g.gap) : Json(nullptr)},
            {"degenerate", g.degenerate},
            {"bound_rhs", g.bound_rhs},
            {"empty_value", g.empty_value},
            {"mode", g.exact ? "exact" : "mc"}};
  std::cout << j.dump(2) << "\n";
  if (g.gap) {
    std::cout << "gap " << FormatDouble(*g.gap) << " at rate "
              << FormatDouble(rate) << " (full " << FormatDouble(g.full_value)
              << ", sampled " << FormatDouble(g.expected_sampled_value)
              << ")\n";
  } else {
    std::cout << "gap undefined at rate " << FormatDouble(rate)
              << ": expected sampled value is not positive\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive submodular maximization under ground-set sampling"};
  app.require_subcommand(1);

  std::string config_path, out_path = "results.csv";
  int workers = 0;
  std::optional<double> run_edge_prob;
  auto* run = app.add_subcommand("run", "run a sampling-rate sweep");
  run->add_option("--config", config_path, "experiment config (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  run->add_option("--out", out_path, "results CSV")->capture_default_str();
  run->add_option("--workers", workers,
                  "worker threads (default: ASGAP_WORKERS or all cores)");
  run->add_option("--edge-prob", run_edge_prob,
                  "default probability for edge-list instances");

  InstanceArgs check_args;
  std::string cls;
  auto* check = app.add_subcommand("check", "test a submodularity class");
  AddInstanceOptions(check, check_args);
  check->add_option("--class", cls, "adaptive, policy-adaptive or policywise")
      ->required()
      ->check(CLI::IsMember({"adaptive", "policy-adaptive", "policywise"}));

  InstanceArgs gap_args;
  double rate = 0.5;
  bool exact = false;
  int trials = 10000;
  std::uint64_t seed = 0;
  auto* gap = app.add_subcommand("gap", "sampling gap at one rate");
  AddInstanceOptions(gap, gap_args);
  gap->add_option("--rate", rate, "inclusion probability r in (0, 1]")
      ->required();
  auto* exact_flag = gap->add_flag("--exact", exact, "exact enumeration");
  auto* mc_opt = gap->add_option("--mc", trials, "Monte-Carlo trials");
  exact_flag->excludes(mc_opt);
  gap->add_option("--seed", seed, "Monte-Carlo seed");

  std::string scope = "all";
  auto* verify = app.add_subcommand("verify", "run the verification suites");
  verify->add_option("--scope", scope, "lemmas, theorem1, counterexample, all")
      ->check(CLI::IsMember({"lemmas", "theorem1", "counterexample", "all"}))
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return RunCommand(config_path, out_path, workers, run_edge_prob);
    if (*check) return CheckCommand(check_args, cls);
    if (*gap) return GapCommand(gap_args, rate, exact || !*mc_opt, trials, seed);
    if (*verify) {
      const VerifyReport report = VerifySuite(VerifyScopeFromName(scope));
      std::cout << report.ToText();
      return report.passed() ? 0 : kExitFailure;
    }
  } catch (const Error& e) {
    std::cerr << "error (" << ErrorCodeName(e.code()) << "): " << e.what()
              << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return 0;
}
