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


#ifndef DYNFL_TESTS_TEST_SUPPORT_H_
#define DYNFL_TESTS_TEST_SUPPORT_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "dynfl/event_stream.h"
#include "dynfl/generators.h"
#include "dynfl/instance.h"
#include "dynfl/types.h"

namespace dynfl::testing {

// Two facilities at 0 and 10 on a line, both costing 4, with clients arriving
// at 0, 1, 9 and 10.
inline GeneratedInput InstA() {
  const std::vector<Distance> positions = {0, 10};
  const std::vector<double> costs = {4.0, 4.0};
  const std::vector<Distance> arrivals = {0, 1, 9, 10};
  return GenerateLine(positions, costs, arrivals);
}

inline std::vector<ClientIndex> RegisterAll(Instance& instance,
                                            const std::vector<Event>& events) {
  std::vector<ClientIndex> out;
  for (const auto& e : events) {
    if (e.kind == EventKind::kArrive) out.push_back(RegisterArrival(instance, e));
  }
  return out;
}

// Facility cost of `open` plus every client at its closest member of `open`.
inline double CostOfOpenSet(const Instance& instance,
                            const std::vector<FacilityId>& open,
                            const std::vector<ClientIndex>& clients,
                            double facility_weight = 1.0) {
  double total = 0.0;
  for (FacilityId i : open) total += facility_weight * instance.opening_cost(i);
  for (ClientIndex j : clients) {
    Distance best = std::numeric_limits<Distance>::max();
    for (FacilityId i : open) best = std::min(best, instance.distance(j, i));
    total += static_cast<double>(best);
  }
  return total;
}

// Optimum by enumerating every assignment of clients to facilities and paying
// for the facilities that are used. Exponential in |C|.
inline double AssignmentEnumerationOpt(const Instance& instance,
                                       const std::vector<ClientIndex>& clients) {
  const int nf = instance.num_facilities();
  const size_t nc = clients.size();
  std::vector<int> choice(nc, 0);
  double best = std::numeric_limits<double>::infinity();
  while (true) {
    std::vector<char> used(nf, 0);
    double cost = 0.0;
    for (size_t k = 0; k < nc; ++k) {
      used[choice[k]] = 1;
      cost += static_cast<double>(instance.distance(clients[k], choice[k]));
    }
    for (int i = 0; i < nf; ++i) {
      if (used[i]) cost += instance.opening_cost(i);
    }
    best = std::min(best, cost);
    size_t k = 0;
    while (k < nc && ++choice[k] == nf) choice[k++] = 0;
    if (k == nc) break;
  }
  return nc == 0 ? 0.0 : best;
}

// Optimum over open sets by plain bitmask enumeration.
inline double SubsetOpt(const Instance& instance,
                        const std::vector<ClientIndex>& clients) {
  if (clients.empty()) return 0.0;
  const int nf = instance.num_facilities();
  double best = std::numeric_limits<double>::infinity();
  for (std::uint32_t mask = 1; mask < (1u << nf); ++mask) {
    std::vector<FacilityId> open;
    for (int i = 0; i < nf; ++i) {
      if (mask >> i & 1u) open.push_back(i);
    }
    best = std::min(best, CostOfOpenSet(instance, open, clients));
  }
  return best;
}

inline double CheapestService(const Instance& instance, ClientIndex j) {
  double best = std::numeric_limits<double>::infinity();
  for (FacilityId i = 0; i < instance.num_facilities(); ++i) {
    best = std::min(best, instance.opening_cost(i) +
                              static_cast<double>(instance.distance(j, i)));
  }
  return best;
}

}  // namespace dynfl::testing

#endif  // DYNFL_TESTS_TEST_SUPPORT_H_
