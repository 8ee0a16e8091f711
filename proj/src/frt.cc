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

#include "dynfl/frt.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <unordered_map>

namespace dynfl {

namespace {

Instance FacilitiesOnly(const Instance& instance) {
  const int nf = instance.num_facilities();
  std::vector<std::vector<Distance>> fdist(nf, std::vector<Distance>(nf));
  for (FacilityId a = 0; a < nf; ++a) {
    for (FacilityId b = 0; b < nf; ++b) {
      fdist[a][b] = instance.facility_distance(a, b);
    }
  }
  const auto costs = instance.opening_costs();
  return Instance({costs.begin(), costs.end()}, std::move(fdist));
}

FacilityId ArgMin(std::span<const Distance> dist) {
  FacilityId best = kNoFacility;
  for (FacilityId i = 0; i < static_cast<int>(dist.size()); ++i) {
    if (best == kNoFacility || dist[i] < dist[best]) best = i;
  }
  return best;
}

}  // namespace

EmbeddingSample SampleHst(const Instance& instance, std::uint64_t seed,
                          bool validate) {
  const int nf = instance.num_facilities();
  if (nf == 0) throw Error("cannot embed an empty metric");
  if (validate && !FacilitiesOnly(instance).SatisfiesTriangleInequality()) {
    throw Error("facility metric violates the triangle inequality");
  }
  EmbeddingSample sample;
  sample.seed = seed;
  Rng rng(seed);
  sample.permutation.resize(nf);
  std::iota(sample.permutation.begin(), sample.permutation.end(), 0);
  std::shuffle(sample.permutation.begin(), sample.permutation.end(), rng);
  sample.beta = std::exp2(std::uniform_real_distribution<double>(0.0, 1.0)(rng));

  Distance diameter = 0;
  for (FacilityId a = 0; a < nf; ++a) {
    for (FacilityId b = 0; b < nf; ++b) {
      diameter = std::max(diameter, instance.facility_distance(a, b));
    }
  }
  int top = 1;
  while ((Distance{1} << (top - 1)) < diameter + 1) ++top;

  std::vector<NodeId> parent{kNoNode};
  std::vector<FacilityId> leaf_facility{kNoFacility};
  struct Cluster {
    NodeId node;
    std::vector<FacilityId> members;
  };
  std::vector<Cluster> clusters(1);
  clusters[0].node = 0;
  clusters[0].members.resize(nf);
  std::iota(clusters[0].members.begin(), clusters[0].members.end(), 0);

  for (int level = top - 1; level >= 1; --level) {
    const double radius = sample.beta * std::ldexp(1.0, level - 1) - 0.5;
    std::vector<Cluster> next;
    for (const Cluster& cluster : clusters) {
      std::vector<char> taken(cluster.members.size(), 0);
      size_t left = cluster.members.size();
      for (FacilityId center : sample.permutation) {
        if (left == 0) break;
        Cluster ball;
        for (size_t k = 0; k < cluster.members.size(); ++k) {
          const FacilityId u = cluster.members[k];
          if (taken[k] ||
              static_cast<double>(instance.facility_distance(u, center)) >
                  radius) {
            continue;
          }
          taken[k] = 1;
          --left;
          ball.members.push_back(u);
        }
        if (ball.members.empty()) continue;
        ball.node = static_cast<NodeId>(parent.size());
        parent.push_back(cluster.node);
        leaf_facility.push_back(kNoFacility);
        next.push_back(std::move(ball));
      }
    }
    clusters = std::move(next);
  }
  for (const Cluster& cluster : clusters) {
    for (FacilityId u : cluster.members) {
      parent.push_back(cluster.node);
      leaf_facility.push_back(u);
    }
  }
  const auto costs = instance.opening_costs();
  sample.tree = Hst(std::move(parent), std::move(leaf_facility),
                    {costs.begin(), costs.end()});
  return sample;
}

StretchStats MeasureStretch(const Instance& instance, const Hst& tree) {
  StretchStats s;
  int positive = 0;
  const int nf = instance.num_facilities();
  for (FacilityId a = 0; a < nf; ++a) {
    for (FacilityId b = a + 1; b < nf; ++b) {
      ++s.pairs;
      const Distance d = instance.facility_distance(a, b);
      const Distance dt = tree.FacilityDistance(a, b);
      if (dt < d) ++s.dominance_violations;
      if (d == 0) continue;
      const double stretch = static_cast<double>(dt) / static_cast<double>(d);
      s.mean_stretch += stretch;
      s.max_stretch = std::max(s.max_stretch, stretch);
      ++positive;
    }
  }
  if (positive > 0) s.mean_stretch /= positive;
  return s;
}

StretchStats MeasureExpectedStretch(const Instance& instance,
                                    std::span<const EmbeddingSample> samples) {
  StretchStats s;
  if (samples.empty()) return s;
  const int nf = instance.num_facilities();
  int positive = 0;
  for (FacilityId a = 0; a < nf; ++a) {
    for (FacilityId b = a + 1; b < nf; ++b) {
      ++s.pairs;
      const Distance d = instance.facility_distance(a, b);
      double sum = 0.0;
      for (const EmbeddingSample& sample : samples) {
        const Distance dt = sample.tree.FacilityDistance(a, b);
        if (dt < d) ++s.dominance_violations;
        sum += static_cast<double>(dt);
      }
      if (d == 0) continue;
      const double stretch =
          sum / static_cast<double>(samples.size()) / static_cast<double>(d);
      s.mean_stretch += stretch;
      s.max_stretch = std::max(s.max_stretch, stretch);
      ++positive;
    }
  }
  if (positive > 0) s.mean_stretch /= positive;
  return s;
}

SnappedInstance SnapClients(const Instance& instance) {
  SnappedInstance out{FacilitiesOnly(instance), {}};
  out.target.reserve(instance.num_clients());
  for (ClientIndex j = 0; j < instance.num_clients(); ++j) {
    const FacilityId t = ArgMin(instance.client_distances(j));
    out.target.push_back(t);
    out.instance.AddCollocatedClient(instance.client_name(j), t);
  }
  return out;
}

double EvaluateOnInstance(const Instance& instance,
                          std::span<const FacilityId> open,
                          std::span<const ClientIndex> clients) {
  std::vector<char> is_open(instance.num_facilities(), 0);
  double total = 0.0;
  for (FacilityId i : open) {
    if (!is_open[i]) total += instance.opening_cost(i);
    is_open[i] = 1;
  }
  for (ClientIndex j : clients) {
    Distance best = std::numeric_limits<Distance>::max();
    for (FacilityId i = 0; i < instance.num_facilities(); ++i) {
      if (is_open[i]) best = std::min(best, instance.distance(j, i));
    }
    if (best == std::numeric_limits<Distance>::max()) {
      throw Error("clients present but nothing is open");
    }
    total += static_cast<double>(best);
  }
  return total;
}

GeneralRun RunFullyDynamicGeneral(const Instance& facilities,
                                  std::span<const Event> events,
                                  std::uint64_t seed) {
  GeneralRun run;
  run.sample = SampleHst(facilities, seed);
  run.ledger.metadata.algorithm = "fully-dynamic-general";
  run.ledger.metadata.seed = seed;
  const Hst& tree = run.sample.tree;
  const int nf = facilities.num_facilities();
  HstState state(tree);

  struct Live {
    ClientHandle handle;
    std::vector<Distance> dist;
  };
  std::unordered_map<std::string, Live> live;
  for (size_t k = 0; k < events.size(); ++k) {
    const Event& e = events[k];
    const auto start = std::chrono::steady_clock::now();
    StepRecord rec;
    rec.t = static_cast<std::int64_t>(k) + 1;
    rec.stage = 1;
    if (e.kind == EventKind::kArrive) {
      if (live.contains(e.client)) {
        throw Error("client '" + e.client + "' arrived twice");
      }
      Live entry;
      FacilityId at = kNoFacility;
      if (e.nearest) {
        at = *e.nearest;
        if (at < 0 || at >= nf) throw Error("unknown facility in arrival");
        entry.dist.resize(nf);
        for (FacilityId i = 0; i < nf; ++i) {
          entry.dist[i] = facilities.facility_distance(at, i);
        }
      } else {
        if (static_cast<int>(e.dist.size()) != nf) {
          throw Error("arrival of '" + e.client + "' has wrong vector length");
        }
        entry.dist = e.dist;
        at = ArgMin(entry.dist);
      }
      entry.handle = state.Insert(at).client;
      live.emplace(e.client, std::move(entry));
      rec.event = "arrive";
    } else {
      const auto it = live.find(e.client);
      if (it == live.end()) {
        throw Error("depart of unknown client '" + e.client + "'");
      }
      state.Delete(it->second.handle);
      live.erase(it);
      rec.event = "depart";
    }
    double cost = state.facility_cost();
    for (const auto& [name, entry] : live) {
      const FacilityId copy = tree.cheapest_facility(state.assignment(entry.handle));
      cost += static_cast<double>(entry.dist[copy]);
    }
    rec.cost = cost;
    rec.grand_total = cost;
    rec.client_recourse_cum = state.reconnections();
    rec.facility_recourse_cum = state.status_changes();
    rec.lb_certificate = state.LowerBoundCertificate();
    rec.marked_count = state.marked_count();
    rec.open_count = state.open_count();
    rec.wall_us = std::chrono::duration<double, std::micro>(
                      std::chrono::steady_clock::now() - start)
                      .count();
    run.tree_cost.push_back(state.cost());
    run.ledger.records.push_back(std::move(rec));
  }
  run.reconnections = state.reconnections();
  return run;
}

}  // namespace dynfl
