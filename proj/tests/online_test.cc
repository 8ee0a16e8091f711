// Copyright 2026 The Dynfl Authors.
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


#include <cmath>
#include <vector>

#include "dynfl/generators.h"
#include "dynfl/online.h"
#include "dynfl/oracle.h"
#include "gtest/gtest.h"
#include "move_simulator.h"
#include "test_support.h"

namespace dynfl {
namespace {

using ::dynfl::testing::CheapestService;
using ::dynfl::testing::FromSolution;
using ::dynfl::testing::InstA;
using ::dynfl::testing::RegisterAll;
using ::dynfl::testing::SubsetOpt;

class InitialConnectTest : public ::testing::Test {
 protected:
  void SetUp() override {
    gen_ = InstA();
    clients_ = RegisterAll(gen_.instance, gen_.events);
  }
  GeneratedInput gen_;
  std::vector<ClientIndex> clients_;
};

TEST_F(InitialConnectTest, EmptySolutionForcesOpen) {
  Solution s(2);
  const InitialConnection ic = InitialConnect(gen_.instance, s, clients_[0]);
  EXPECT_TRUE(ic.opened);
  EXPECT_EQ(ic.facility, 0);
  EXPECT_DOUBLE_EQ(ic.delta, 4.0);
}

TEST_F(InitialConnectTest, ConnectsWhenCheaper) {
  Solution s(2);
  s.Open(0);
  const InitialConnection ic = InitialConnect(gen_.instance, s, clients_[1]);
  EXPECT_FALSE(ic.opened);
  EXPECT_EQ(ic.facility, 0);
  EXPECT_DOUBLE_EQ(ic.delta, 1.0);
}

TEST_F(InitialConnectTest, OpensWhenCheaper) {
  Solution s(2);
  s.Open(0);
  const InitialConnection ic = InitialConnect(gen_.instance, s, clients_[3]);
  EXPECT_TRUE(ic.opened);
  EXPECT_EQ(ic.facility, 1);
  EXPECT_DOUBLE_EQ(ic.delta, 4.0);
}

TEST(OnlineStageTest, SingleClientStage) {
  RandomMetricParams p;
  p.facilities = 5;
  p.arrivals = 1;
  auto gen = GenerateRandomMetric(p, 4);
  Solution s(5);
  const StageResult r = RunStage(gen.instance, gen.events, s, 0.05);
  ASSERT_EQ(r.steps.size(), 1u);
  // The local search settles on the facility with the smallest scaled
  // service cost, which need not be the cheapest unscaled one.
  FacilityId best = 0;
  for (FacilityId i = 1; i < 5; ++i) {
    const auto scaled = [&](FacilityId f) {
      return kLambda * gen.instance.opening_cost(f) +
             static_cast<double>(gen.instance.distance(0, f));
    };
    if (scaled(i) < scaled(best)) best = i;
  }
  EXPECT_LE(r.steps[0].converge.iterations, 1);
  EXPECT_EQ(s.OpenFacilities(), std::vector<FacilityId>{best});
  EXPECT_DOUBLE_EQ(r.steps[0].cost_after,
                   gen.instance.opening_cost(best) +
                       static_cast<double>(gen.instance.distance(0, best)));
  EXPECT_GE(r.steps[0].cost_after, CheapestService(gen.instance, 0));
}

TEST(OnlineTest, InstAReachesOptimum) {
  auto gen = InstA();
  RunOptions options;
  options.verify_every = 1;
  options.oracle = OracleCost;
  const OnlineRun run = RunOnline(gen.instance, gen.events, 0.3, options);
  EXPECT_EQ(run.solution.OpenFacilities(), (std::vector<FacilityId>{0, 1}));
  ASSERT_EQ(run.ledger.records.size(), 4u);
  const StepRecord& last = run.ledger.records.back();
  EXPECT_DOUBLE_EQ(last.grand_total, 10.0);
  ASSERT_TRUE(last.ratio.has_value());
  EXPECT_DOUBLE_EQ(*last.ratio, 1.0);
}

TEST(OnlineTest, OpeningPrefixFreezesNothing) {
  // The first arrival closes the empty opening stage, whose frozen
  // snapshot is the empty solution.
  auto gen = InstA();
  const OnlineRun run = RunOnline(gen.instance, gen.events, 0.3);
  EXPECT_EQ(run.stages, 2);
  EXPECT_TRUE(run.solution.frozen_clients().empty());
  EXPECT_DOUBLE_EQ(run.ledger.records.back().frozen_cost, 0.0);
}

TEST(OnlineTest, DeparturesAreRejected) {
  auto gen = InstA();
  gen.events.push_back({EventKind::kDepart, "c0", {}, std::nullopt});
  EXPECT_THROW(RunOnline(gen.instance, gen.events, 0.3), Error);
  EXPECT_THROW(OnlineAlgorithm(gen.instance, 0.0), Error);
}

TEST(OnlineTest, ZeroCostPrefixIsItsOwnStage) {
  Instance instance({0.0, 3.0}, {{0, 5}, {5, 0}});
  std::vector<Event> events;
  for (int k = 0; k < 3; ++k) {
    events.push_back(
        {EventKind::kArrive, "z" + std::to_string(k), {0, 5}, std::nullopt});
  }
  events.push_back({EventKind::kArrive, "far", {5, 0}, std::nullopt});
  RunOptions options;
  options.verify_every = 1;
  options.oracle = OracleCost;
  const OnlineRun run = RunOnline(instance, events, 0.3, options);
  for (int k = 0; k < 3; ++k) {
    EXPECT_DOUBLE_EQ(run.ledger.records[k].grand_total, 0.0);
    EXPECT_DOUBLE_EQ(*run.ledger.records[k].ratio, 1.0);
  }
  EXPECT_EQ(run.stages, 2);
  EXPECT_LE(*run.ledger.records.back().ratio, kAlphaFL + 0.3 + 1e-9);
}

TEST(OnlineStageTest, StageRatioAndLocalOptimalityAfterEveryStep) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    RandomMetricParams p;
    p.facilities = 6;
    p.arrivals = 12;
    auto gen = GenerateRandomMetric(p, seed);
    const double eps_prime = 0.05;
    Solution s(6);
    OnlineStage stage(gen.instance, s, eps_prime);
    std::vector<ClientIndex> arrived;
    for (const Event& e : gen.events) {
      const ClientIndex j = RegisterArrival(gen.instance, e);
      arrived.push_back(j);
      const OnlineStep step = stage.Arrive(j);
      const double opt = SubsetOpt(gen.instance, arrived);
      EXPECT_LE(step.cost_after, kAlphaFL / (1.0 - eps_prime) * opt + 1e-9);
      const double phi = EfficiencyThreshold(
          eps_prime, Cost(s, gen.instance).total, s.num_active());
      EXPECT_FALSE(FromSolution(gen.instance, s).AnyEfficient(phi))
          << "seed " << seed << " t " << arrived.size();
      EXPECT_LE(step.delta, CheapestService(gen.instance, j) + 1e-9);
      if (stage.ended()) break;
    }
  }
}

TEST(OnlineTest, MultiStageRunKeepsGrandTotalRatio) {
  int multi_stage_runs = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    RandomMetricParams p;
    p.facilities = 6;
    p.arrivals = 40;
    auto gen = GenerateRandomMetric(p, seed);
    const double epsilon = 3.0;
    RunOptions options;
    options.verify_every = 1;
    options.oracle = OracleCost;
    const OnlineRun run = RunOnline(gen.instance, gen.events, epsilon, options);
    multi_stage_runs += run.stages > 1;
    for (const StepRecord& r : run.ledger.records) {
      EXPECT_LE(*r.ratio, kAlphaFL + epsilon + 1e-9);
      EXPECT_NEAR(r.grand_total, r.cost + r.frozen_cost, 1e-9);
    }
    if (run.stages > 1) {
      EXPECT_FALSE(run.solution.frozen_clients().empty());
      EXPECT_GT(run.ledger.records.back().frozen_cost, 0.0);
    }
    EXPECT_LE(run.recourse.facility - run.recourse.idle_facility,
              2 * run.recourse.client);
  }
  EXPECT_GT(multi_stage_runs, 0);
}

TEST(OnlineTest, CumulativeCountersNeverDecrease) {
  RandomMetricParams p;
  p.facilities = 8;
  p.arrivals = 80;
  auto gen = GenerateRandomMetric(p, 99);
  const OnlineRun run = RunOnline(gen.instance, gen.events, 0.3);
  for (size_t k = 1; k < run.ledger.records.size(); ++k) {
    const auto& a = run.ledger.records[k - 1];
    const auto& b = run.ledger.records[k];
    EXPECT_LE(a.client_recourse_cum, b.client_recourse_cum);
    EXPECT_LE(a.facility_recourse_cum, b.facility_recourse_cum);
    EXPECT_LE(a.frozen_cost, b.frozen_cost);
    EXPECT_EQ(b.t, a.t + 1);
  }
}

TEST(CompetitiveRatioTest, ZeroOverZeroIsOne) {
  EXPECT_DOUBLE_EQ(CompetitiveRatio(0.0, 0.0), 1.0);
  EXPECT_TRUE(std::isinf(CompetitiveRatio(1.0, 0.0)));
  EXPECT_DOUBLE_EQ(CompetitiveRatio(6.0, 4.0), 1.5);
}

}  // namespace
}  // namespace dynfl
