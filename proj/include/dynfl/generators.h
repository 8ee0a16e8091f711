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

#ifndef DYNFL_GENERATORS_H_
#define DYNFL_GENERATORS_H_

#include <cstdint>
#include <span>
#include <vector>

#include "dynfl/event_stream.h"
#include "dynfl/hst.h"
#include "dynfl/instance.h"

namespace dynfl {

struct GeneratedInput {
  // Facilities only; clients are described by the events.
  Instance instance;
  std::vector<Event> events;
};

// Facilities and arriving clients on the integer line.
GeneratedInput GenerateLine(std::span<const Distance> facility_positions,
                            std::span<const double> costs,
                            std::span<const Distance> arrival_positions);

struct RandomMetricParams {
  int facilities = 10;
  int arrivals = 50;
  // Points are drawn from {0..grid}^dimensions under the L1 distance.
  int grid = 100;
  int dimensions = 2;
  // Integer opening costs drawn uniformly from [min_cost, max_cost].
  int min_cost = 1;
  int max_cost = 100;
  // After each arrival a random live client departs with this probability.
  double depart_probability = 0.0;
};

GeneratedInput GenerateRandomMetric(const RandomMetricParams& params,
                                    std::uint64_t seed);

struct HstParams {
  int depth = 3;
  int leaves = 8;
  int min_cost = 1;
  int max_cost = 64;
  int arrivals = 100;
  double depart_probability = 0.3;
};

struct GeneratedHst {
  Hst tree;
  // The leaf metric of the tree.
  Instance instance;
  // Arrivals carry the facility they sit on.
  std::vector<Event> events;
};

GeneratedHst GenerateHst(const HstParams& params, std::uint64_t seed);

// A random uniform-depth tree with the given leaf costs.
Hst RandomHst(int depth, std::span<const double> leaf_costs, Rng& rng);

}  // namespace dynfl

#endif  // DYNFL_GENERATORS_H_
