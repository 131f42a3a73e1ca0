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

#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "asgap/checkers.h"
#include "asgap/exact_model.h"
#include "asgap/fixtures.h"
#include "asgap/sampling_gap.h"
#include "oracles.h"

namespace asgap {
namespace {

constexpr double kTol = 1e-9;

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& err) {
    return err.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::kInvalidInstance;
}

void ExpectSameInstance(const Instance& x, const Instance& y) {
  ASSERT_EQ(x.n, y.n);
  ASSERT_EQ(x.state_count, y.state_count);
  ASSERT_EQ(x.prior.size(), y.prior.size());
  for (int i = 0; i < x.prior.size(); ++i) {
    EXPECT_EQ(x.prior.realization(i), y.prior.realization(i));
    EXPECT_DOUBLE_EQ(x.prior.probability(i), y.prior.probability(i));
    for (Mask m = 0; m < (Mask{1} << x.n); ++m) {
      const ItemSet s = ItemSet::FromMask(m);
      EXPECT_DOUBLE_EQ(x.utility->Evaluate(s, x.prior.realization(i)),
                       y.utility->Evaluate(s, y.prior.realization(i)));
      EXPECT_EQ(x.system->Contains(s), y.system->Contains(s));
    }
  }
}

const char* kTable = R"({
  "n": 2, "state_count": 2,
  "prior": [{"states": [0, 1], "prob": 0.25}, {"states": [1, 1], "prob": 0.75}],
  "utility": {"table": {"": [0, 0], "0": [1, 2], "1": [0.5, 0.5],
                        "0-1": [1.5, 2]}},
  "system": {"kind": "cardinality", "k": 1}
})";

TEST(InstanceJsonTest, ParsesTableForm) {
  LoadedInstance li = InstanceFromJson(Json::parse(kTable));
  EXPECT_EQ(li.kind, "table");
  const Instance& inst = li.Require();
  EXPECT_EQ(inst.n, 2);
  EXPECT_NEAR(inst.utility->Evaluate(ItemSet{0}, {1, 1}), 2.0, kTol);
  EXPECT_NEAR(inst.utility->Evaluate(ItemSet{0, 1}, {0, 1}), 1.5, kTol);
  EXPECT_TRUE(inst.system->Contains(ItemSet{1}));
  EXPECT_FALSE(inst.system->Contains(ItemSet{0, 1}));
  EXPECT_NEAR(MarginalItem(inst, {}, 0), 0.25 * 1 + 0.75 * 2, kTol);
}

TEST(InstanceJsonTest, RejectsMalformedInput) {
  Json base = Json::parse(kTable);
  auto load = [](Json j) { InstanceFromJson(j); };

  Json missing = base;
  missing.erase("prior");
  EXPECT_EQ(CodeOf([&] { load(missing); }), ErrorCode::kInvalidInstance);

  Json short_row = base;
  short_row["utility"]["table"]["0"] = {1};
  EXPECT_EQ(CodeOf([&] { load(short_row); }), ErrorCode::kInvalidInstance);

  Json bad_key = base;
  bad_key["utility"]["table"]["0-x"] = {1, 1};
  EXPECT_EQ(CodeOf([&] { load(bad_key); }), ErrorCode::kParse);

  Json not_closed = base;
  not_closed["system"] = {{"kind", "explicit"}, {"sets", {{}, {0, 1}}}};
  EXPECT_EQ(CodeOf([&] { load(not_closed); }), ErrorCode::kInvalidParameter);

  Json unknown = base;
  unknown["system"] = {{"kind", "matching"}};
  EXPECT_EQ(CodeOf([&] { load(unknown); }), ErrorCode::kInvalidInstance);

  Json bad_prior = base;
  bad_prior["prior"][0]["prob"] = 0.5;
  EXPECT_THROW(load(bad_prior), Error);

  EXPECT_EQ(CodeOf([&] { load(Json{{"kind", "nope"}}); }),
            ErrorCode::kInvalidInstance);
}

TEST(InstanceJsonTest, SystemDescriptors) {
  Json knap = {{"kind", "knapsack"}, {"costs", {1.0, 2.0, 3.0}}, {"budget", 3.0}};
  SystemPtr k = SystemFromJson(knap, 3);
  EXPECT_TRUE(k->Contains(ItemSet{0, 1}));
  EXPECT_FALSE(k->Contains(ItemSet{1, 2}));
  Json part = {{"kind", "partition"},
               {"blocks", {{0, 1}, {2}}},
               {"limits", {1, 1}}};
  SystemPtr p = SystemFromJson(part, 3);
  EXPECT_FALSE(p->Contains(ItemSet{0, 1}));
  EXPECT_TRUE(p->Contains(ItemSet{0, 2}));
  EXPECT_EQ(SystemToJson(*k), knap);
  EXPECT_EQ(SystemToJson(*p), part);
  EXPECT_THROW(SystemFromJson(knap, 4), Error);
}

TEST(InstanceJsonTest, RoundTripsRandomInstances) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    Instance inst = trial % 2 ? RandomIndependentInstance(rng, {})
                              : RandomCorrelatedInstance(rng, 3, 3);
    Json j = InstanceToJson(inst);
    LoadedInstance back = InstanceFromJson(Json::parse(j.dump()));
    ExpectSameInstance(inst, back.Require());
  }
}

TEST(InstanceJsonTest, CounterexampleSurvivesTableRoundTrip) {
  Counterexample cx = CounterexampleInstance();
  LoadedInstance back = InstanceFromJson(InstanceToJson(*cx.ic.instance));
  EXPECT_NEAR(MarginalPolicy(back.Require(), {}, cx.pi), 2.5, kTol);
  EXPECT_NEAR(MarginalPolicy(back.Require(), cx.psi_b, cx.pi), 5.0, kTol);
}

TEST(InstanceJsonTest, GeneratedKinds) {
  LoadedInstance lb = InstanceFromJson({{"kind", "lower-bound"}});
  EXPECT_NEAR(OptimalValue(lb.Require()), 1.0, kTol);

  Json al = {{"kind", "active-learning"}, {"hypotheses", 12}, {"points", 4},
             {"queries", 3}, {"labels", 2}, {"k", 2}, {"seed", 3}};
  LoadedInstance a = InstanceFromJson(al);
  ASSERT_TRUE(a.active_learning);
  EXPECT_EQ(a.Require().n, 3);
  EXPECT_EQ(a.k, 2);
  ActiveLearningInstance direct =
      GenerateActiveLearningInstance({12, 4, 3, {2}, 2, 3});
  ExpectSameInstance(a.Require(), direct.instance);

  Json nested = {{"n", 0}, {"utility", al}};
  EXPECT_EQ(InstanceFromJson(nested).kind, "active-learning");

  Json ic = {{"kind", "ic"}, {"edges", {{0, 1, 0.5}, {1, 2}}}, {"k", 1},
             {"edge_prob", 1.0}};
  LoadedInstance c = InstanceFromJson(ic);
  ASSERT_TRUE(c.ic);
  EXPECT_EQ(c.graph->edge_count(), 2);
  EXPECT_DOUBLE_EQ(c.graph->edge(1).probability, 1.0);
  EXPECT_NEAR(EmptySetValue(c.Require()), 0.0, kTol);
  EXPECT_NEAR(MarginalItem(c.Require(), {}, 0), 1 + 0.5 * 2, kTol);
  EXPECT_EQ(c.system->Rank(), 1);
}

TEST(InstanceJsonTest, LargeCascadesStayUnmaterialized) {
  Json ic = {{"kind", "ic"},
             {"synthetic", {{"nodes", 40}, {"density", 0.1}, {"p", 0.05},
                            {"seed", 2}}},
             {"k", 4}};
  LoadedInstance c = InstanceFromJson(ic);
  EXPECT_EQ(c.graph->node_count(), 40);
  EXPECT_FALSE(c.instance);
  EXPECT_EQ(CodeOf([&] { c.Require(); }), ErrorCode::kCapacity);
}

TEST(InstanceJsonTest, EdgeListFilesResolveRelativeToTheInstance) {
  auto dir = std::filesystem::temp_directory_path() / "asgap_io_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream(dir / "g.txt") << "# tiny\n10 20 0.5\n20 30\n";
    std::ofstream(dir / "inst.json")
        << R"({"kind": "ic", "edge_list": "g.txt", "edge_prob": 0.25, "k": 2})";
    std::ofstream(dir / "broken.json") << "{ not json";
  }
  LoadedInstance li = LoadInstanceFile((dir / "inst.json").string());
  EXPECT_EQ(li.node_labels, (std::vector<std::string>{"10", "20", "30"}));
  EXPECT_DOUBLE_EQ(li.graph->edge(1).probability, 0.25);
  EXPECT_EQ(li.Require().prior.size(), 4);
  EXPECT_EQ(CodeOf([&] { LoadInstanceFile((dir / "broken.json").string()); }),
            ErrorCode::kParse);
  EXPECT_EQ(CodeOf([&] { LoadInstanceFile((dir / "absent.json").string()); }),
            ErrorCode::kParse);
  std::filesystem::remove_all(dir);
}

TEST(PolicyJsonTest, RoundTripAndFormat) {
  Policy pi = Policy::Select(1, {{0, Policy::Path({2})}, {1, Policy{}}});
  Json j = PolicyToJson(pi);
  EXPECT_EQ(j, Json::parse(R"({"item": 1, "children": {
      "0": {"item": 2, "children": {"*": "stop"}}, "1": "stop"}})"));
  EXPECT_EQ(PolicyFromJson(j), pi);
  EXPECT_EQ(PolicyToJson(Policy{}), "stop");
  EXPECT_TRUE(PolicyFromJson("stop").empty());

  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    Instance inst = RandomCorrelatedInstance(rng, 3, 2);
    Policy opt =
        OptimalRestrictedPolicy(inst, *inst.system, {}).policy;
    Policy back = PolicyFromJson(Json::parse(PolicyToJson(opt).dump()));
    EXPECT_EQ(back, opt);
    EXPECT_NEAR(ExpectedUtility(inst, back), ExpectedUtility(inst, opt), kTol);
  }
}

TEST(PolicyJsonTest, RejectsMalformedTrees) {
  EXPECT_EQ(CodeOf([] { PolicyFromJson("halt"); }), ErrorCode::kMalformedPolicy);
  EXPECT_EQ(CodeOf([] { PolicyFromJson(Json{{"children", Json::object()}}); }),
            ErrorCode::kMalformedPolicy);
  EXPECT_EQ(CodeOf([] {
              PolicyFromJson(Json::parse(
                  R"({"item": 0, "children": {"x": "stop"}})"));
            }),
            ErrorCode::kMalformedPolicy);
}

}  // namespace
}  // namespace asgap
