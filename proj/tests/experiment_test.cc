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

#include <cmath>

#include <gtest/gtest.h>

#include "asgap/sampling_gap.h"

namespace asgap {
namespace {

constexpr double kTol = 1e-9;

ResultRow Row(const std::string& alg, double rate, int sample, double u) {
  return ResultRow{alg, rate, sample, 0, u, "exact", 0.0};
}

ExperimentConfig Config(const std::string& text) {
  return ConfigFromJson(Json::parse(text));
}

const SummaryRow& Find(const std::vector<SummaryRow>& s, const std::string& alg,
                       double rate) {
  for (const SummaryRow& row : s) {
    if (row.algorithm == alg && row.rate == rate) return row;
  }
  throw std::runtime_error("missing summary group");
}

TEST(SummarizeTest, Examples) {
  auto constant = Summarize({Row("AG", 0.5, 0, 3), Row("AG", 0.5, 1, 3),
                             Row("AG", 0.5, 2, 3)});
  ASSERT_EQ(constant.size(), 1u);
  EXPECT_EQ(constant[0].ci_half_width, 0.0);
  EXPECT_EQ(constant[0].mean, 3.0);

  auto two = Summarize({Row("NG", 1, 0, 0), Row("NG", 1, 1, 1)});
  EXPECT_NEAR(two[0].mean, 0.5, kTol);
  EXPECT_NEAR(two[0].stddev, std::sqrt(0.5), kTol);
  EXPECT_NEAR(two[0].ci_half_width, 1.96 * std::sqrt(0.5) / std::sqrt(2.0),
              kTol);
  EXPECT_FALSE(two[0].degenerate);

  auto single = Summarize({Row("RDM", 0.1, 0, 7)});
  EXPECT_EQ(single[0].stddev, 0.0);
  EXPECT_TRUE(single[0].degenerate);
}

TEST(SummarizeTest, GroupsAreSortedByAlgorithmThenRate) {
  auto s = Summarize({Row("RDM", 0.2, 0, 1), Row("AG", 0.9, 0, 1),
                      Row("AG", 0.1, 0, 1), Row("NG", 0.5, 0, 1)});
  ASSERT_EQ(s.size(), 4u);
  EXPECT_EQ(s[0].algorithm + FormatDouble(s[0].rate), "AG0.1");
  EXPECT_EQ(s[1].algorithm + FormatDouble(s[1].rate), "AG0.9");
  EXPECT_EQ(s[2].algorithm, "NG");
  EXPECT_EQ(s[3].algorithm, "RDM");
}

TEST(ConfigTest, DefaultsAndValidation) {
  ExperimentConfig cfg = Config(R"({"instance": {"kind": "lower-bound"}})");
  EXPECT_EQ(cfg.rates.size(), 10u);
  EXPECT_EQ(cfg.samples_per_rate, 30);
  EXPECT_EQ(cfg.trials, 10000);
  EXPECT_EQ(cfg.algorithms.size(), 3u);
  EXPECT_EQ(Config(R"({"instance": "x.json"})").instance.at("file"), "x.json");

  for (const char* bad : {
           R"({"instance": {"kind": "lower-bound"}, "rates": [0.0]})",
           R"({"instance": {"kind": "lower-bound"}, "rates": [1.5]})",
           R"({"instance": {"kind": "lower-bound"}, "samples_per_rate": 0})",
           R"({"instance": {"kind": "lower-bound"}, "algorithms": ["XX"]})",
           R"({"instance": {"kind": "lower-bound"}, "mode": "fast"})",
           R"({"instance": {"kind": "lower-bound"}, "colour": 1})",
           R"({"rates": [0.5]})",
       }) {
    try {
      Config(bad);
      ADD_FAILURE() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kInvalidParameter) << bad;
    }
  }
}

TEST(RunExperimentTest, LowerBoundSweepTracksTheRate) {
  ExperimentConfig cfg = Config(R"({"instance": {"kind": "lower-bound"},
      "algorithms": ["AG"], "rates": [0.5], "samples_per_rate": 10000,
      "seed": 3})");
  ExperimentResult res = RunExperiment(cfg, 1);
  EXPECT_EQ(res.mode, "exact");
  ASSERT_EQ(res.rows.size(), 10000u);
  ASSERT_EQ(res.summary.size(), 1u);
  EXPECT_NEAR(res.summary[0].mean, 0.5, 0.01);
  for (const ResultRow& r : res.rows) {
    EXPECT_EQ(r.utility, r.subset_size);
  }
}

TEST(RunExperimentTest, FullRateHasNoSamplingVariance) {
  ExperimentConfig cfg = Config(R"({"instance": {"kind": "active-learning",
      "hypotheses": 30, "points": 6, "queries": 5, "labels": 2, "k": 2,
      "seed": 1}, "rates": [1.0], "samples_per_rate": 6})");
  ExperimentResult res = RunExperiment(cfg, 1);
  const SummaryRow& ag = Find(res.summary, "AG", 1.0);
  EXPECT_EQ(ag.stddev, 0.0);
  for (const ResultRow& r : res.rows) EXPECT_EQ(r.subset_size, 5);
}

TEST(RunExperimentTest, FullGroundSetDominatesOnMonotoneFixtures) {
  ExperimentConfig cfg = Config(R"({"instance": {"kind": "active-learning",
      "hypotheses": 40, "points": 8, "queries": 6, "labels": 2, "k": 3,
      "seed": 9}, "rates": [0.3, 0.6, 1.0], "samples_per_rate": 20})");
  ExperimentResult res = RunExperiment(cfg, 1);
  for (const char* alg : {"AG", "NG", "RDM"}) {
    const SummaryRow& full = Find(res.summary, alg, 1.0);
    for (double r : {0.3, 0.6}) {
      const SummaryRow& part = Find(res.summary, alg, r);
      EXPECT_GE(full.mean,
                part.mean - 3 * (full.ci_half_width + part.ci_half_width))
          << alg << " " << r;
    }
  }
}

TEST(RunExperimentTest, DeterministicAcrossRunsAndWorkerCounts) {
  const char* text = R"({"instance": {"kind": "ic", "synthetic":
      {"nodes": 20, "density": 0.15, "p": 0.1, "seed": 4}, "k": 3},
      "rates": [0.4, 1.0], "samples_per_rate": 4, "trials": 300,
      "evaluation_realizations": 30, "seed": 11})";
  ExperimentConfig cfg = Config(text);
  ExperimentResult one = RunExperiment(cfg, 1);
  ExperimentResult again = RunExperiment(cfg, 1);
  ExperimentResult pooled = RunExperiment(cfg, 3);
  EXPECT_EQ(one.mode, "mc");
  const std::string csv = WriteResultsCsv(one, cfg);
  EXPECT_EQ(csv, WriteResultsCsv(again, cfg));
  EXPECT_EQ(csv, WriteResultsCsv(pooled, cfg));
  EXPECT_NE(csv.find("# mode=mc"), std::string::npos);

  ExperimentConfig other = cfg;
  other.seed = 12;
  EXPECT_NE(csv, WriteResultsCsv(RunExperiment(other, 1), other));
}

TEST(RunExperimentTest, AddingAnAlgorithmLeavesOtherRowsAlone) {
  ExperimentConfig all = Config(R"({"instance": {"kind": "active-learning",
      "hypotheses": 20, "points": 5, "queries": 5, "labels": 2, "k": 2,
      "seed": 2}, "rates": [0.5], "samples_per_rate": 8, "seed": 5})");
  ExperimentConfig rdm_only = all;
  rdm_only.algorithms = {Algorithm::kRandom};
  ExperimentResult a = RunExperiment(all, 1);
  ExperimentResult b = RunExperiment(rdm_only, 1);
  std::vector<ResultRow> from_all;
  for (const ResultRow& r : a.rows) {
    if (r.algorithm == "RDM") from_all.push_back(r);
  }
  EXPECT_EQ(from_all, b.rows);
}

TEST(RunExperimentTest, MonteCarloHarnessAgreesWithExactOnATinyGraph) {
  const std::string instance = R"("instance": {"kind": "ic",
      "edges": [[0, 1, 0.5], [1, 2, 0.5], [3, 4, 0.3]], "k": 2})";
  const std::string common = R"(, "rates": [1.0, 0.6], "samples_per_rate": 3,
      "trials": 4000, "evaluation_realizations": 4000, "seed": 8)";
  ExperimentConfig exact = Config("{" + instance + common + "}");
  ExperimentConfig mc =
      Config("{" + instance + common + R"(, "mode": "mc"})");
  ExperimentResult e = RunExperiment(exact, 1);
  ExperimentResult m = RunExperiment(mc, 1);
  EXPECT_EQ(e.mode, "exact");
  EXPECT_EQ(m.mode, "mc");
  ASSERT_EQ(e.rows.size(), m.rows.size());
  for (std::size_t i = 0; i < e.rows.size(); ++i) {
    EXPECT_EQ(e.rows[i].subset_size, m.rows[i].subset_size);
    EXPECT_NEAR(e.rows[i].utility, m.rows[i].utility, 0.06)
        << e.rows[i].algorithm << " " << e.rows[i].rate;
  }
  // At rate 1: pick 0 first, then 3 if node 1 was reached, else 1.
  const double ag = 1.75 + 0.5 * 1.3 + 0.5 * 1.5;
  EXPECT_NEAR(Find(e.summary, "AG", 1.0).mean, ag, kTol);
}

TEST(RunExperimentTest, ExactModeRejectsLargeCascades) {
  ExperimentConfig cfg = Config(R"({"instance": {"kind": "ic", "synthetic":
      {"nodes": 40, "p": 0.05}, "k": 2}, "mode": "exact"})");
  try {
    RunExperiment(cfg, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kCapacity);
  }
  ExperimentConfig al = Config(R"({"instance": {"kind": "lower-bound"},
      "mode": "mc"})");
  EXPECT_THROW(RunExperiment(al, 1), Error);
}

TEST(CsvTest, RoundTrip) {
  ExperimentConfig cfg = Config(R"({"instance": {"kind": "active-learning",
      "hypotheses": 15, "points": 5, "queries": 4, "labels": 3, "k": 2,
      "seed": 6}, "rates": [0.1, 0.7, 1.0], "samples_per_rate": 5,
      "record_wall_time": true})");
  ExperimentResult res = RunExperiment(cfg, 1);
  const std::string csv = WriteResultsCsv(res, cfg);
  ParsedCsv parsed = ParseResultsCsv(csv);
  EXPECT_EQ(parsed.rows, res.rows);
  EXPECT_EQ(parsed.metadata.at("mode"), "exact");
  EXPECT_EQ(parsed.metadata.at("instance"), "active-learning");
  EXPECT_EQ(WriteSummaryCsv(Summarize(parsed.rows)),
            WriteSummaryCsv(res.summary));
  const std::string first_row = csv.substr(
      csv.find("algorithm,rate,sample,subset_size,utility,mode,wall_ms\n"));
  EXPECT_EQ(first_row.substr(first_row.find('\n') + 1, 7), "AG,0.1,");
}

TEST(CsvTest, WallTimeIsZeroUnlessRequested) {
  ExperimentConfig cfg = Config(R"({"instance": {"kind": "lower-bound"},
      "rates": [0.5], "samples_per_rate": 3})");
  for (const ResultRow& r : RunExperiment(cfg, 1).rows) {
    EXPECT_EQ(r.wall_ms, 0.0);
  }
}

TEST(CsvTest, SchemaErrors) {
  EXPECT_THROW(ParseResultsCsv("# only comments\n"), Error);
  EXPECT_THROW(ParseResultsCsv("algorithm,rate\nAG,0.1\n"), Error);
  const std::string header =
      "algorithm,rate,sample,subset_size,utility,mode,wall_ms\n";
  EXPECT_THROW(ParseResultsCsv(header + "AG,0.1,0,3,1.5,exact\n"), Error);
  EXPECT_THROW(ParseResultsCsv(header + "AG,zero,0,3,1.5,exact,0\n"), Error);
  EXPECT_THROW(ParseResultsCsv(header + "AG,0.1,0,3,nan,exact,0\n"), Error);
  EXPECT_EQ(ParseResultsCsv(header + "AG,0.1,0,3,1.5,exact,0\n").rows.size(),
            1u);
}

TEST(CsvTest, HelperFormats) {
  EXPECT_EQ(FormatDouble(0.1), "0.1");
  EXPECT_EQ(FormatDouble(1.0), "1");
  EXPECT_EQ(std::stod(FormatDouble(1.0 / 3.0)), 1.0 / 3.0);
  EXPECT_EQ(SummaryPathFor("out/results.csv"), "out/results.summary.csv");
  EXPECT_EQ(SummaryPathFor("results"), "results.summary.csv");
  EXPECT_EQ(AlgorithmFromName(AlgorithmName(Algorithm::kRandom)),
            Algorithm::kRandom);
}

}  // namespace
}  // namespace asgap
