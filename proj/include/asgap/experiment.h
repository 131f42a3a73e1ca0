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


#ifndef ASGAP_EXPERIMENT_H_
#define ASGAP_EXPERIMENT_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "asgap/instance_io.h"

namespace asgap {

enum class Algorithm { kAdaptiveGreedy, kNonadaptiveGreedy, kRandom };

std::string AlgorithmName(Algorithm a);  // "AG", "NG", "RDM"
Algorithm AlgorithmFromName(const std::string& name);

enum class ExperimentMode { kAuto, kExact, kMonteCarlo };

struct ExperimentConfig {
  // Inline instance descriptor, or {"file": path}.
  Json instance;
  std::string base_dir = ".";
  std::vector<Algorithm> algorithms = {Algorithm::kAdaptiveGreedy,
                                       Algorithm::kNonadaptiveGreedy,
                                       Algorithm::kRandom};
  std::vector<double> rates = {0.1, 0.2, 0.3, 0.4, 0.5,
                               0.6, 0.7, 0.8, 0.9, 1.0};
  int samples_per_rate = 30;
  // Simulated worlds behind each Monte-Carlo marginal estimate.
  int trials = 10000;
  // Ground-truth cascades each policy is scored on in Monte-Carlo mode.
  int evaluation_realizations = 200;
  // Selection budget for RDM and for generated cascade systems; defaults to
  // the instance's own k.
  std::optional<int> k;
  std::uint64_t seed = 0;
  ExperimentMode mode = ExperimentMode::kAuto;
  bool record_wall_time = false;
  double edge_probability = kDefaultEdgeProbability;

  // Throws kInvalidParameter.
  void Validate() const;
};

ExperimentConfig ConfigFromJson(const Json& j, const std::string& base_dir = ".");
ExperimentConfig LoadConfigFile(const std::string& path);

struct ResultRow {
  std::string algorithm;
  double rate = 0.0;
  int sample = 0;
  int subset_size = 0;
  double utility = 0.0;
  std::string mode;  // "exact" or "mc"
  double wall_ms = 0.0;

  friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

struct RowError {
  std::string algorithm;
  double rate = 0.0;
  int sample = 0;
  std::string message;
};

struct SummaryRow {
  std::string algorithm;
  double rate = 0.0;
  int count = 0;
  double mean = 0.0;
  double stddev = 0.0;
  double ci_half_width = 0.0;
  bool degenerate = false;  // a single row; stddev reported as 0
};

struct ExperimentResult {
  std::string mode;
  std::string instance_kind;
  std::vector<ResultRow> rows;  // sorted by (algorithm, rate, sample)
  std::vector<RowError> errors;
  std::vector<SummaryRow> summary;
  std::vector<std::string> warnings;
  std::vector<std::string> node_labels;
};

// Worker count from ASGAP_WORKERS, else the available parallelism.
int DefaultWorkerCount();

ExperimentResult RunExperiment(const ExperimentConfig& cfg, int workers = 0);

// Mean, sample standard deviation and the normal 95% half-width
// 1.96 * s / sqrt(n) per (algorithm, rate), sorted by that key.
std::vector<SummaryRow> Summarize(const std::vector<ResultRow>& rows);

// Shortest text that parses back to the same double.
std::string FormatDouble(double x);

std::string WriteResultsCsv(const ExperimentResult& result,
                            const ExperimentConfig& cfg);
std::string WriteSummaryCsv(const std::vector<SummaryRow>& summary);

struct ParsedCsv {
  std::map<std::string, std::string> metadata;
  std::vector<ResultRow> rows;
};
// Throws kParse on a schema mismatch.
ParsedCsv ParseResultsCsv(const std::string& text);

// results.csv -> results.summary.csv
std::string SummaryPathFor(const std::string& results_path);

}  // namespace asgap

#endif  // ASGAP_EXPERIMENT_H_
