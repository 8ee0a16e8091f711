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

#ifndef DYNFL_FRT_H_
#define DYNFL_FRT_H_

#include <cstdint>
#include <span>
#include <vector>

#include "dynfl/event_stream.h"
#include "dynfl/hst.h"
#include "dynfl/hst_dynamic.h"
#include "dynfl/instance.h"
#include "dynfl/ledger.h"

namespace dynfl {

// One tree drawn from the random embedding of the facility metric.
struct EmbeddingSample {
  Hst tree;
  // Center order used for ball cutting.
  std::vector<FacilityId> permutation;
  // Radius scale in [1, 2).
  double beta = 1.0;
  std::uint64_t seed = 0;
};

// Random hierarchical decomposition of the facility metric. The level-i
// clusters are carved with balls of radius beta * 2^(i-1) - 1/2 around the
// centers in permutation order, level 0 holds single facilities and the top
// level holds all of F. Every tree dominates the integer metric. With
// `validate` set, a metric violating the triangle inequality is rejected.
EmbeddingSample SampleHst(const Instance& instance, std::uint64_t seed,
                          bool validate = false);

struct StretchStats {
  int pairs = 0;
  // Pairs with d_T < d.
  int dominance_violations = 0;
  // Mean of d_T / d over pairs with d > 0.
  double mean_stretch = 0.0;
  double max_stretch = 0.0;
};

StretchStats MeasureStretch(const Instance& instance, const Hst& tree);

// Expected stretch estimated from several samples: per pair the mean of
// d_T / d, then averaged (mean_stretch) and maximized (max_stretch) over pairs.
StretchStats MeasureExpectedStretch(const Instance& instance,
                                    std::span<const EmbeddingSample> samples);

struct SnappedInstance {
  // Same facilities; every client is moved onto its nearest facility.
  Instance instance;
  // Nearest facility of each client, ties to the smallest id.
  std::vector<FacilityId> target;
};

SnappedInstance SnapClients(const Instance& instance);

// Facility cost of `open` plus the distance of every client of `clients` to
// its nearest open facility, under the instance's own distances.
double EvaluateOnInstance(const Instance& instance,
                          std::span<const FacilityId> open,
                          std::span<const ClientIndex> clients);

struct GeneralRun {
  EmbeddingSample sample;
  RunLedger ledger;
  // Per event: the solution cost measured in the tree.
  std::vector<double> tree_cost;
  std::int64_t reconnections = 0;
};

// Fully dynamic facility location on a general metric: samples one tree
// before reading any event, snaps each arrival to its nearest facility and
// runs the tree algorithm. Ledger costs re-price connections with the
// original distances to the assigned facility copy.
GeneralRun RunFullyDynamicGeneral(const Instance& facilities,
                                  std::span<const Event> events,
                                  std::uint64_t seed);

}  // namespace dynfl

#endif  // DYNFL_FRT_H_
