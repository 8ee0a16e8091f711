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

#include "dynfl/generators.h"

#include <algorithm>
#include <cstdlib>
#include <string>

namespace dynfl {

namespace {

std::string ClientName(int k) { return "c" + std::to_string(k); }

// Appends a departure of a uniformly chosen live client with probability p.
void MaybeDepart(double p, std::vector<std::string>& live,
                 std::vector<Event>& events, Rng& rng) {
  if (live.empty() || p <= 0.0) return;
  if (std::uniform_real_distribution<double>(0.0, 1.0)(rng) >= p) return;
  const size_t k = std::uniform_int_distribution<size_t>(0, live.size() - 1)(rng);
  Event e;
  e.kind = EventKind::kDepart;
  e.client = live[k];
  events.push_back(std::move(e));
  live[k] = live.back();
  live.pop_back();
}

}  // namespace

GeneratedInput GenerateLine(std::span<const Distance> facility_positions,
                            std::span<const double> costs,
                            std::span<const Distance> arrival_positions) {
  const size_t nf = facility_positions.size();
  if (costs.size() != nf) throw Error("one cost per facility expected");
  std::vector<std::vector<Distance>> fdist(nf, std::vector<Distance>(nf));
  for (size_t a = 0; a < nf; ++a) {
    for (size_t b = 0; b < nf; ++b) {
      fdist[a][b] = std::abs(facility_positions[a] - facility_positions[b]);
    }
  }
  GeneratedInput out{Instance({costs.begin(), costs.end()}, std::move(fdist)),
                     {}};
  for (size_t k = 0; k < arrival_positions.size(); ++k) {
    Event e;
    e.client = ClientName(static_cast<int>(k));
    for (Distance p : facility_positions) {
      e.dist.push_back(std::abs(arrival_positions[k] - p));
    }
    out.events.push_back(std::move(e));
  }
  return out;
}

GeneratedInput GenerateRandomMetric(const RandomMetricParams& params,
                                    std::uint64_t seed) {
  if (params.facilities < 1 || params.arrivals < 0 || params.grid < 1 ||
      params.dimensions < 1 || params.min_cost < 0 ||
      params.max_cost < params.min_cost || params.depart_probability < 0.0 ||
      params.depart_probability > 1.0) {
    throw Error("invalid random-metric parameters");
  }
  Rng rng(seed);
  std::uniform_int_distribution<int> coord(0, params.grid);
  std::uniform_int_distribution<int> cost(params.min_cost, params.max_cost);
  const auto point = [&] {
    std::vector<Distance> p(params.dimensions);
    for (auto& x : p) x = coord(rng);
    return p;
  };
  const auto l1 = [](const std::vector<Distance>& a,
                     const std::vector<Distance>& b) {
    Distance d = 0;
    for (size_t k = 0; k < a.size(); ++k) d += std::abs(a[k] - b[k]);
    return d;
  };
  const int nf = params.facilities;
  std::vector<std::vector<Distance>> where(nf);
  std::vector<double> costs(nf);
  for (int i = 0; i < nf; ++i) {
    where[i] = point();
    costs[i] = cost(rng);
  }
  std::vector<std::vector<Distance>> fdist(nf, std::vector<Distance>(nf));
  for (int a = 0; a < nf; ++a) {
    for (int b = 0; b < nf; ++b) fdist[a][b] = l1(where[a], where[b]);
  }
  GeneratedInput out{Instance(std::move(costs), std::move(fdist)), {}};
  std::vector<std::string> live;
  for (int k = 0; k < params.arrivals; ++k) {
    const auto p = point();
    Event e;
    e.client = ClientName(k);
    for (int i = 0; i < nf; ++i) e.dist.push_back(l1(p, where[i]));
    out.events.push_back(std::move(e));
    live.push_back(ClientName(k));
    MaybeDepart(params.depart_probability, live, out.events, rng);
  }
  return out;
}

Hst RandomHst(int depth, std::span<const double> leaf_costs, Rng& rng) {
  const int leaves = static_cast<int>(leaf_costs.size());
  if (depth < 0 || leaves < 1) throw Error("invalid tree shape");
  if (depth == 0 && leaves > 1) throw Error("depth 0 holds a single leaf");
  // Node counts per depth grow from 1 at the root to `leaves`.
  std::vector<int> width(depth + 1, 1);
  width[depth] = leaves;
  for (int k = 1; k < depth; ++k) {
    width[k] = std::uniform_int_distribution<int>(1, leaves)(rng);
  }
  std::sort(width.begin(), width.end());
  std::vector<NodeId> parent;
  std::vector<FacilityId> facility;
  std::vector<NodeId> prev_row{0};
  parent.push_back(kNoNode);
  facility.push_back(depth == 0 ? 0 : kNoFacility);
  for (int k = 1; k <= depth; ++k) {
    std::vector<NodeId> row;
    std::vector<NodeId> owners = prev_row;
    std::uniform_int_distribution<size_t> any(0, prev_row.size() - 1);
    while (static_cast<int>(owners.size()) < width[k]) {
      owners.push_back(prev_row[any(rng)]);
    }
    std::shuffle(owners.begin() + prev_row.size(), owners.end(), rng);
    for (NodeId p : owners) {
      row.push_back(static_cast<NodeId>(parent.size()));
      parent.push_back(p);
      facility.push_back(kNoFacility);
    }
    prev_row = std::move(row);
  }
  if (depth > 0) {
    std::vector<FacilityId> ids(leaves);
    for (int i = 0; i < leaves; ++i) ids[i] = i;
    std::shuffle(ids.begin(), ids.end(), rng);
    for (int k = 0; k < leaves; ++k) facility[prev_row[k]] = ids[k];
  }
  return Hst(std::move(parent), std::move(facility),
             {leaf_costs.begin(), leaf_costs.end()});
}

GeneratedHst GenerateHst(const HstParams& params, std::uint64_t seed) {
  if (params.leaves < 1 || params.depth < 0 || params.min_cost < 0 ||
      params.max_cost < params.min_cost || params.arrivals < 0 ||
      params.depart_probability < 0.0 || params.depart_probability > 1.0) {
    throw Error("invalid hst parameters");
  }
  Rng rng(seed);
  std::uniform_int_distribution<int> cost(params.min_cost, params.max_cost);
  std::vector<double> costs(params.leaves);
  for (auto& c : costs) c = cost(rng);
  Hst tree = RandomHst(params.depth, costs, rng);
  GeneratedHst out{tree, tree.LeafInstance(), {}};
  std::uniform_int_distribution<int> leaf(0, params.leaves - 1);
  std::vector<std::string> live;
  for (int k = 0; k < params.arrivals; ++k) {
    Event e;
    e.client = ClientName(k);
    e.nearest = leaf(rng);
    out.events.push_back(std::move(e));
    live.push_back(ClientName(k));
    MaybeDepart(params.depart_probability, live, out.events, rng);
  }
  return out;
}

}  // namespace dynfl
