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


#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "dynfl/generators.h"
#include "dynfl/randomized_search.h"
#include "gtest/gtest.h"
#include "test_support.h"

namespace dynfl {
namespace {

using ::dynfl::testing::CostOfOpenSet;
using ::dynfl::testing::InstA;
using ::dynfl::testing::RegisterAll;

std::vector<FacilityId> Members(const std::vector<char>& open) {
  std::vector<FacilityId> out;
  for (size_t i = 0; i < open.size(); ++i) {
    if (open[i]) out.push_back(static_cast<FacilityId>(i));
  }
  return out;
}

double ScaledOf(const Instance& instance, const std::vector<char>& open,
                const std::vector<ClientIndex>& clients) {
  return CostOfOpenSet(instance, Members(open), clients, kLambda);
}

// Compares the heap-backed state with a from-scratch rebuild.
void ExpectConsistent(const SearchState& state) {
  const Instance& inst = state.instance();
  std::vector<ClientIndex> clients(state.clients().begin(),
                                   state.clients().end());
  std::vector<char> open(inst.num_facilities(), 0);
  for (FacilityId i : state.OpenFacilities()) open[i] = 1;
  double f = 0.0;
  for (FacilityId i : Members(open)) f += inst.opening_cost(i);
  EXPECT_NEAR(state.facility_cost(), f, 1e-9);
  Distance cc = 0;
  for (ClientIndex j : clients) {
    std::vector<std::pair<Distance, FacilityId>> all;
    for (FacilityId i : Members(open)) all.emplace_back(inst.distance(j, i), i);
    std::sort(all.begin(), all.end());
    ASSERT_FALSE(all.empty());
    EXPECT_EQ(state.assignment(j), all.front().second);
    cc += all.front().first;
    const auto heap = state.HeapContents(j);
    ASSERT_EQ(heap.size(), all.size() - 1);
    for (size_t k = 0; k < heap.size(); ++k) {
      EXPECT_EQ(heap[k].facility, all[k + 1].second);
      EXPECT_EQ(heap[k].distance, all[k + 1].first);
    }
  }
  EXPECT_EQ(state.connection_cost(), cc);
}

class InstASearchTest : public ::testing::Test {
 protected:
  void SetUp() override {
    gen_ = InstA();
    clients_ = RegisterAll(gen_.instance, gen_.events);
  }
  SearchState With(std::vector<FacilityId> open) const {
    SearchState s(gen_.instance);
    s.Reset(open, clients_);
    return s;
  }
  GeneratedInput gen_;
  std::vector<ClientIndex> clients_;
};

TEST_F(InstASearchTest, HeapTop) {
  const SearchState both = With({0, 1});
  EXPECT_EQ(both.HeapTop(clients_[1]), (Nearest{1, 9}));
  const SearchState one = With({0});
  EXPECT_THROW(one.HeapTop(clients_[1]), Error);
}

TEST_F(InstASearchTest, HeapTopTieRule) {
  Instance instance({1.0, 1.0}, {{0, 10}, {10, 0}});
  const std::vector<Distance> mid = {5, 5};
  const ClientIndex j = instance.AddClient("mid", mid);
  SearchState s(instance);
  const std::vector<FacilityId> open = {0, 1};
  const std::vector<ClientIndex> clients = {j};
  s.Reset(open, clients);
  EXPECT_EQ(s.assignment(j), 0);
  EXPECT_EQ(s.HeapTop(j), (Nearest{1, 5}));
}

TEST_F(InstASearchTest, DeltaOpen) {
  const SearchState s = With({0});
  EXPECT_NEAR(s.DeltaOpen(1), kLambda * 4.0 - 18.0, 1e-9);
  EXPECT_NEAR(s.DeltaOpen(1), -12.343, 1e-3);
  EXPECT_NEAR(s.DeltaOpen(0), 0.0, 1e-12);
  SearchState empty(gen_.instance);
  const std::vector<FacilityId> open = {0};
  empty.Reset(open, {});
  EXPECT_NEAR(empty.DeltaOpen(1), kLambda * 4.0, 1e-12);
}

TEST_F(InstASearchTest, TryOpen) {
  SearchState s = With({0});
  EXPECT_TRUE(s.TryOpen(1));
  EXPECT_TRUE(s.is_open(1));
  EXPECT_EQ(s.assignment(clients_[2]), 1);
  EXPECT_EQ(s.assignment(clients_[3]), 1);
  EXPECT_NEAR(s.DeltaOpen(1), 0.0, 1e-12);
  EXPECT_FALSE(s.TryOpen(1));
  ExpectConsistent(s);
}

TEST_F(InstASearchTest, TryOpenWithOriginalCost) {
  SearchState s = With({0});
  EXPECT_NEAR(s.DeltaOpen(1, 1.0), 4.0 - 18.0, 1e-12);
  EXPECT_TRUE(s.TryOpen(1, 1.0));
  EXPECT_DOUBLE_EQ(s.cost(), 10.0);
}

TEST_F(InstASearchTest, DeltaSwapInSingleOpen) {
  const SearchState s = With({0});
  const auto c = s.DeltaSwapIn(1);
  EXPECT_EQ(c.facility, 0);
  std::vector<char> after = {0, 1};
  std::vector<char> before = {1, 0};
  EXPECT_NEAR(c.delta,
              ScaledOf(gen_.instance, after, clients_) -
                  ScaledOf(gen_.instance, before, clients_),
              1e-9);
  EXPECT_THROW(s.DeltaSwapIn(0), Error);
}

TEST(DeltaSwapInTest, NoClientsCheaperFacility) {
  Instance instance({5.0, 2.0}, {{0, 3}, {3, 0}});
  SearchState s(instance);
  const std::vector<FacilityId> open = {0};
  s.Reset(open, {});
  const auto c = s.DeltaSwapIn(1);
  EXPECT_EQ(c.facility, 0);
  EXPECT_NEAR(c.delta, kLambda * (2.0 - 5.0), 1e-12);
}

TEST_F(InstASearchTest, DeltaClose) {
  const SearchState s = With({0, 1});
  const auto c = s.DeltaClose();
  EXPECT_EQ(c.facility, 0);
  EXPECT_NEAR(c.delta, 18.0 - kLambda * 4.0, 1e-9);
  EXPECT_THROW(With({0}).DeltaClose(), Error);
}

TEST_F(InstASearchTest, DeltaCloseIdleFacility) {
  SearchState s(gen_.instance);
  const std::vector<FacilityId> open = {0, 1};
  const std::vector<ClientIndex> near_a = {clients_[0], clients_[1]};
  s.Reset(open, near_a);
  const auto c = s.DeltaClose();
  EXPECT_EQ(c.facility, 1);
  EXPECT_NEAR(c.delta, -kLambda * 4.0, 1e-12);
}

TEST_F(InstASearchTest, MutationGuards) {
  SearchState s = With({0});
  EXPECT_THROW(s.Close(0), Error);
  EXPECT_THROW(s.AddClient(clients_[0]), Error);
  EXPECT_THROW(s.AddClient(99), Error);
  SearchState none(gen_.instance);
  none.Reset({}, {});
  EXPECT_THROW(none.AddClient(clients_[0]), Error);
}

TEST_F(InstASearchTest, SampledSearchFromSingleFacilityImproves) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    SearchState s = With({0});
    Rng rng(seed);
    SearchState::Move m = SearchState::Move::kNone;
    while (m == SearchState::Move::kNone) m = s.SampledLocalSearch(rng);
    EXPECT_NE(m, SearchState::Move::kClose);
    EXPECT_LT(s.scaled_cost(), kLambda * 4.0 + 20.0);
  }
}

TEST_F(InstASearchTest, LocalOptimumIsAFixedPoint) {
  SearchState s = With({0, 1});
  Rng rng(1);
  for (int k = 0; k < 100; ++k) {
    EXPECT_EQ(s.SampledLocalSearch(rng), SearchState::Move::kNone);
  }
}

TEST_F(InstASearchTest, FlIterate) {
  SearchState s = With({0});
  Rng rng(1);
  const auto zero = s.FlIterate(0, rng);
  EXPECT_EQ(zero.iterations, 0);
  EXPECT_EQ(s.OpenFacilities(), std::vector<FacilityId>{0});
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    SearchState t = With({0});
    Rng r(seed);
    const auto res = t.FlIterate(50, r);
    EXPECT_DOUBLE_EQ(t.cost(), 10.0);
    EXPECT_DOUBLE_EQ(res.best_cost, 10.0);
    EXPECT_DOUBLE_EQ(res.initial_cost, 24.0);
    ExpectConsistent(t);
  }
}

struct RandomState {
  GeneratedInput gen;
  std::vector<ClientIndex> clients;
};

RandomState MakeRandom(std::uint64_t seed, Rng& rng) {
  RandomMetricParams p;
  p.facilities = std::uniform_int_distribution<int>(2, 8)(rng);
  p.arrivals = std::uniform_int_distribution<int>(0, 20)(rng);
  RandomState out{GenerateRandomMetric(p, seed), {}};
  out.clients = RegisterAll(out.gen.instance, out.gen.events);
  return out;
}

std::vector<FacilityId> RandomOpenSet(int nf, Rng& rng) {
  std::vector<FacilityId> open;
  for (int i = 0; i < nf; ++i) {
    if (std::bernoulli_distribution(0.5)(rng)) open.push_back(i);
  }
  if (open.empty()) open.push_back(std::uniform_int_distribution<int>(0, nf - 1)(rng));
  return open;
}

TEST(SearchStatePropertyTest, DeltasMatchFullRecomputation) {
  Rng rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    const RandomState in = MakeRandom(3000 + trial, rng);
    const Instance& inst = in.gen.instance;
    const int nf = inst.num_facilities();
    SearchState s(inst);
    const auto open_ids = RandomOpenSet(nf, rng);
    s.Reset(open_ids, in.clients);
    std::vector<char> open(nf, 0);
    for (FacilityId i : open_ids) open[i] = 1;
    const double base = ScaledOf(inst, open, in.clients);
    ASSERT_NEAR(s.scaled_cost(), base, 1e-9);
    for (FacilityId i = 0; i < nf; ++i) {
      auto with = open;
      with[i] = 1;
      EXPECT_NEAR(s.DeltaOpen(i), ScaledOf(inst, with, in.clients) - base,
                  1e-9);
      if (open[i]) continue;
      double best = std::numeric_limits<double>::infinity();
      for (FacilityId out : open_ids) {
        auto swapped = with;
        swapped[out] = 0;
        best = std::min(best, ScaledOf(inst, swapped, in.clients) - base);
      }
      const auto c = s.DeltaSwapIn(i);
      EXPECT_NEAR(c.delta, best, 1e-9);
      auto chosen = with;
      chosen[c.facility] = 0;
      EXPECT_NEAR(ScaledOf(inst, chosen, in.clients) - base, c.delta, 1e-9);
    }
    double best_close = std::numeric_limits<double>::infinity();
    for (FacilityId out : open_ids) {
      auto without = open;
      without[out] = 0;
      if (Members(without).empty() && !in.clients.empty()) continue;
      if (open_ids.size() == 1 && !in.clients.empty()) continue;
      best_close = std::min(best_close,
                            ScaledOf(inst, without, in.clients) - base);
    }
    if (std::isinf(best_close)) {
      EXPECT_THROW(s.DeltaClose(), Error);
    } else {
      const auto c = s.DeltaClose();
      EXPECT_NEAR(c.delta, best_close, 1e-9);
    }
  }
}

TEST(SearchStatePropertyTest, HeapsMatchRebuildAfterMutations) {
  Rng rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    const RandomState in = MakeRandom(5000 + trial, rng);
    const int nf = in.gen.instance.num_facilities();
    SearchState s(in.gen.instance);
    s.Reset(RandomOpenSet(nf, rng), {});
    std::vector<ClientIndex> pending = in.clients;
    for (int step = 0; step < 40; ++step) {
      const int kind = std::uniform_int_distribution<int>(0, 5)(rng);
      const FacilityId i = std::uniform_int_distribution<int>(0, nf - 1)(rng);
      if (kind == 0) {
        s.Open(i);
      } else if (kind == 1) {
        if (s.is_open(i) && (s.num_open() > 1 || s.num_clients() == 0)) {
          s.Close(i);
        }
      } else if (kind == 2) {
        if (!s.is_open(i) && s.num_open() > 0) {
          s.Swap(i, s.OpenFacilities().front());
        }
      } else if (kind == 3) {
        if (!pending.empty() && s.num_open() > 0) {
          s.AddClient(pending.back());
          pending.pop_back();
        }
      } else if (kind == 4) {
        if (s.num_clients() > 0) {
          const ClientIndex j = s.clients()[std::uniform_int_distribution<int>(
              0, s.num_clients() - 1)(rng)];
          s.RemoveClient(j);
          pending.push_back(j);
        }
      } else {
        const double before = s.scaled_cost();
        s.SampledLocalSearch(rng);
        EXPECT_LE(s.scaled_cost(), before + 1e-9);
      }
      if (s.num_open() == 0) s.Open(i);
      ExpectConsistent(s);
    }
  }
}

TEST(SearchStatePropertyTest, FlIterateReturnsBestSeen) {
  Rng rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    RandomMetricParams p;
    p.facilities = 8;
    p.arrivals = 16;
    auto gen = GenerateRandomMetric(p, 7000 + trial);
    const auto clients = RegisterAll(gen.instance, gen.events);
    SearchState s(gen.instance);
    s.Reset(RandomOpenSet(8, rng), clients);
    // Replay the same random sequence step by step to observe every state.
    SearchState probe = s;
    const std::uint64_t seed = 100 + trial;
    Rng replay(seed);
    double lowest = probe.cost();
    for (int k = 0; k < 200; ++k) {
      probe.SampledLocalSearch(replay);
      lowest = std::min(lowest, probe.cost());
    }
    Rng r(seed);
    const auto res = s.FlIterate(200, r);
    EXPECT_NEAR(res.best_cost, lowest, 1e-9);
    EXPECT_NEAR(s.cost(), lowest, 1e-9);
    ExpectConsistent(s);
  }
}

TEST(SearchStateTest, ToSolutionMirrorsState) {
  auto gen = InstA();
  const auto clients = RegisterAll(gen.instance, gen.events);
  SearchState s(gen.instance);
  const std::vector<FacilityId> open = {0, 1};
  s.Reset(open, clients);
  const Solution sol = s.ToSolution();
  EXPECT_DOUBLE_EQ(Cost(sol, gen.instance).total, s.cost());
  for (ClientIndex j : clients) EXPECT_EQ(sol.assignment(j), s.assignment(j));
  EXPECT_STREQ(MoveName(SearchState::Move::kSwap), "swap");
}

}  // namespace
}  // namespace dynfl
