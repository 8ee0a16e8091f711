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
#include <limits>
#include <optional>
#include <vector>

#include "dynfl/local_search.h"
#include "dynfl/oracle.h"
#include "dynfl/solution.h"
#include "gtest/gtest.h"
#include "move_simulator.h"
#include "test_support.h"

namespace dynfl {
namespace {

using ::dynfl::testing::InstA;
using ::dynfl::testing::RegisterAll;
using ::dynfl::testing::FromSolution;
using ::dynfl::testing::Sim;
using ::dynfl::testing::SimMove;
using ::dynfl::testing::SubsetOpt;

class InstALocalSearchTest : public ::testing::Test {
 protected:
  void SetUp() override {
    gen_ = InstA();
    clients_ = RegisterAll(gen_.instance, gen_.events);
  }
  Solution AllOnA() const {
    Solution s(2);
    s.Open(0);
    for (ClientIndex j : clients_) s.Assign(j, 0);
    return s;
  }
  Solution Split() const {
    Solution s(2);
    s.Open(0);
    s.Open(1);
    for (ClientIndex j : clients_) s.Assign(j, j < 2 ? 0 : 1);
    return s;
  }
  GeneratedInput gen_;
  std::vector<ClientIndex> clients_;
};

TEST_F(InstALocalSearchTest, OpenBMovesTheFarClients) {
  const Solution s = AllOnA();
  const auto op = FindEfficientOpen(gen_.instance, s, 1, 0.0);
  ASSERT_TRUE(op.has_value());
  EXPECT_EQ(op->kind, OpKind::kOpen);
  EXPECT_EQ(op->open_id, 1);
  EXPECT_FALSE(op->close_id.has_value());
  ASSERT_EQ(op->reconnections.size(), 2u);
  EXPECT_EQ(op->reconnections[0].client, 2);
  EXPECT_EQ(op->reconnections[1].client, 3);
  EXPECT_NEAR(op->scaled_delta, 4.0 * std::sqrt(2.0) - 18.0, 1e-9);
}

TEST_F(InstALocalSearchTest, OpenOfOpenFacilityWithoutImproversIsNone) {
  EXPECT_FALSE(FindEfficientOpen(gen_.instance, Split(), 0, 0.0));
  EXPECT_FALSE(FindEfficientOpen(gen_.instance, AllOnA(), 0, 0.0));
}

TEST_F(InstALocalSearchTest, HugePhiBlocksEveryMove) {
  const Solution s = AllOnA();
  EXPECT_FALSE(FindEfficientOpen(gen_.instance, s, 1, 100.0));
  EXPECT_FALSE(FindAnyEfficientOp(gen_.instance, s, 100.0));
}

TEST_F(InstALocalSearchTest, CloseIdleFacility) {
  Solution s = AllOnA();
  s.Open(1);
  const auto op = FindEfficientClose(gen_.instance, s, 1, 0.0);
  ASSERT_TRUE(op.has_value());
  EXPECT_TRUE(op->reconnections.empty());
  EXPECT_NEAR(op->scaled_delta, -4.0 * std::sqrt(2.0), 1e-9);
  const Recourse r = ApplyOp(s, *op);
  EXPECT_EQ(r.client, 0);
  EXPECT_EQ(r.facility, 1);
  EXPECT_EQ(r.idle_facility, 1);
}

TEST_F(InstALocalSearchTest, CloseWithReconnectionPenaltyIsNone) {
  EXPECT_FALSE(FindEfficientClose(gen_.instance, Split(), 1, 0.0));
}

TEST_F(InstALocalSearchTest, CloseOfOnlyServingFacilityThrows) {
  EXPECT_THROW(FindEfficientClose(gen_.instance, AllOnA(), 0, 0.0), Error);
  EXPECT_THROW(FindEfficientClose(gen_.instance, AllOnA(), 1, 0.0), Error);
}

TEST_F(InstALocalSearchTest, SwapMatchesFullReassignment) {
  const Solution s = AllOnA();
  const Sim sim = FromSolution(gen_.instance, s);
  const SimMove expected = sim.Swap(1, 0, 0.0);
  // Everyone moves to b: 0 -> 10, 1 -> 9, 9 -> 1, 10 -> 0.
  EXPECT_NEAR(expected.scaled_delta, 0.0, 1e-9);
  const auto op = FindEfficientSwap(gen_.instance, s, 1, 0, 0.0);
  EXPECT_FALSE(op.has_value());
  EXPECT_THROW(FindEfficientSwap(gen_.instance, s, 0, 0, 0.0), Error);
  EXPECT_THROW(FindEfficientSwap(gen_.instance, s, 1, 1, 0.0), Error);
}

TEST(SwapTest, CollocatedCheaperFacility) {
  Instance instance({5.0, 2.0}, {{0, 0}, {0, 0}});
  const std::vector<Distance> at = {0, 0};
  const ClientIndex j = instance.AddClient("j", at);
  Solution s(2);
  s.Open(0);
  s.Assign(j, 0);
  const auto op = FindEfficientSwap(instance, s, 1, 0, 0.0);
  ASSERT_TRUE(op.has_value());
  EXPECT_NEAR(op->scaled_delta, kLambda * (2.0 - 5.0), 1e-9);
  ASSERT_EQ(op->reconnections.size(), 1u);
  EXPECT_EQ(op->reconnections[0].to, 1);
}

TEST_F(InstALocalSearchTest, ScanFindsOpenOfB) {
  const auto op = FindAnyEfficientOp(gen_.instance, AllOnA(), 0.0);
  ASSERT_TRUE(op.has_value());
  EXPECT_EQ(op->kind, OpKind::kOpen);
  EXPECT_EQ(op->open_id, 1);
}

TEST(ScanTest, NoClientsNoOps) {
  Instance instance({1.0, 2.0}, {{0, 3}, {3, 0}});
  Solution s(2);
  EXPECT_FALSE(FindAnyEfficientOp(instance, s, 0.0));
}

TEST_F(InstALocalSearchTest, ApplyAndStaleness) {
  Solution s = AllOnA();
  const auto op = FindEfficientOpen(gen_.instance, s, 1, 0.0);
  ASSERT_TRUE(op.has_value());
  const double before = ScaledCost(s, gen_.instance);
  const Recourse r = ApplyOp(s, *op);
  EXPECT_EQ(r.client, 2);
  EXPECT_EQ(r.facility, 1);
  EXPECT_NEAR(ScaledCost(s, gen_.instance) - before, op->scaled_delta, 1e-9);
  try {
    ApplyOp(s, *op);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("stale"), std::string::npos);
  }
}

TEST_F(InstALocalSearchTest, ConvergeReachesOptimum) {
  Solution s = AllOnA();
  const ConvergeResult r = Converge(gen_.instance, s, 0.0);
  EXPECT_GT(r.iterations, 0);
  EXPECT_EQ(s.OpenFacilities(), (std::vector<FacilityId>{0, 1}));
  EXPECT_DOUBLE_EQ(Cost(s, gen_.instance).total, 10.0);
  EXPECT_FALSE(FromSolution(gen_.instance, s).AnyEfficient(0.0));
  EXPECT_EQ(Converge(gen_.instance, s, 0.0).iterations, 0);
}

TEST(LocalSearchTest, NegativePhiIsRejected) {
  auto gen = InstA();
  EXPECT_THROW(FindAnyEfficientOp(gen.instance, Solution(2), -1.0), Error);
}

struct Seeded {
  GeneratedInput gen;
  std::vector<ClientIndex> clients;
};

Seeded RandomInstance(std::uint64_t seed, int facilities, int clients) {
  RandomMetricParams p;
  p.facilities = facilities;
  p.arrivals = clients;
  Seeded out{GenerateRandomMetric(p, seed), {}};
  out.clients = RegisterAll(out.gen.instance, out.gen.events);
  return out;
}

// Starts from a random open set with random assignments.
Solution RandomStart(const Seeded& in, Rng& rng) {
  const int nf = in.gen.instance.num_facilities();
  Solution s(nf);
  std::vector<FacilityId> open;
  for (int i = 0; i < nf; ++i) {
    if (std::bernoulli_distribution(0.4)(rng)) open.push_back(i);
  }
  if (open.empty()) open.push_back(0);
  for (FacilityId i : open) s.Open(i);
  for (ClientIndex j : in.clients) {
    s.Assign(j, open[std::uniform_int_distribution<size_t>(
                    0, open.size() - 1)(rng)]);
  }
  return s;
}

TEST(LocalSearchPropertyTest, ReturnedDeltasMatchSimulation) {
  Rng rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    const Seeded in = RandomInstance(500 + trial, 5, 8);
    const Solution s = RandomStart(in, rng);
    const Sim sim = FromSolution(in.gen.instance, s);
    for (double phi : {0.0, 1.0, 5.0}) {
      for (FacilityId i = 0; i < 5; ++i) {
        if (auto op = FindEfficientOpen(in.gen.instance, s, i, phi)) {
          const SimMove m = sim.Open(i, phi);
          EXPECT_NEAR(op->scaled_delta, m.scaled_delta, 1e-9);
          EXPECT_EQ(static_cast<int>(op->reconnections.size()),
                    m.reconnections);
        } else {
          EXPECT_FALSE(Sim::Efficient(sim.Open(i, phi), phi));
        }
        if (!s.is_open(i)) continue;
        for (FacilityId in_id = 0; in_id < 5; ++in_id) {
          if (s.is_open(in_id)) continue;
          if (auto op = FindEfficientSwap(in.gen.instance, s, in_id, i, phi)) {
            const SimMove m = sim.Swap(in_id, i, phi);
            EXPECT_NEAR(op->scaled_delta, m.scaled_delta, 1e-9);
          } else {
            EXPECT_FALSE(Sim::Efficient(sim.Swap(in_id, i, phi), phi));
          }
        }
      }
    }
  }
}

TEST(LocalSearchPropertyTest, ConvergeEndsAtLocalOptimumWithinBound) {
  Rng rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    const Seeded in = RandomInstance(900 + trial, 6, 10);
    const double opt = SubsetOpt(in.gen.instance, in.clients);
    for (double phi : {0.0, 0.5, 2.0}) {
      Solution s = RandomStart(in, rng);
      double previous = ScaledCost(s, in.gen.instance);
      while (auto op = FindAnyEfficientOp(in.gen.instance, s, phi)) {
        ApplyOp(s, *op);
        const double now = ScaledCost(s, in.gen.instance);
        ASSERT_LT(now, previous);
        previous = now;
      }
      EXPECT_FALSE(FromSolution(in.gen.instance, s).AnyEfficient(phi));
      const double bound =
          kAlphaFL * (opt + static_cast<double>(in.clients.size()) * phi);
      EXPECT_LE(Cost(s, in.gen.instance).total, bound + 1e-6);
    }
  }
}

TEST(LocalSearchPropertyTest, ConvergeRecourseInvariant) {
  Rng rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const Seeded in = RandomInstance(1300 + trial, 6, 12);
    Solution s = RandomStart(in, rng);
    const ConvergeResult r = Converge(in.gen.instance, s, 0.0);
    EXPECT_LE(r.recourse.facility - r.recourse.idle_facility,
              2 * r.recourse.client);
  }
}

}  // namespace
}  // namespace dynfl
