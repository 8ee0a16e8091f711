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

#ifndef DYNFL_RANDOMIZED_SEARCH_H_
#define DYNFL_RANDOMIZED_SEARCH_H_

#include <cstdint>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "dynfl/instance.h"
#include "dynfl/solution.h"
#include "dynfl/types.h"

namespace dynfl {

// Heap-backed local search state. Every active client is connected to its
// nearest open facility (ties to the smallest id) and owns a min-heap holding
// the other open facilities keyed by (distance, id), so the second-nearest
// open facility is available at the heap top.
class SearchState {
 public:
  struct Candidate {
    double delta = 0.0;
    FacilityId facility = kNoFacility;
  };

  enum class Move { kNone, kOpen, kClose, kSwap };

  struct IterateResult {
    std::int64_t iterations = 0;
    std::int64_t moves = 0;
    double initial_cost = 0.0;
    double best_cost = 0.0;
  };

  explicit SearchState(const Instance& instance);

  // Rebuilds S, sigma and every heap. Clients need a nonempty open set.
  void Reset(std::span<const FacilityId> open,
             std::span<const ClientIndex> clients);

  const Instance& instance() const { return *instance_; }
  bool is_open(FacilityId i) const { return open_[i] != 0; }
  int num_open() const { return num_open_; }
  std::vector<FacilityId> OpenFacilities() const;
  std::span<const ClientIndex> clients() const { return clients_; }
  int num_clients() const { return static_cast<int>(clients_.size()); }
  bool has_client(ClientIndex j) const {
    return j >= 0 && j < static_cast<int>(slot_of_.size()) &&
           slot_of_[j] >= 0;
  }
  FacilityId assignment(ClientIndex j) const { return sigma_[slot_of_[j]]; }

  double facility_cost() const { return facility_cost_; }
  Distance connection_cost() const { return connection_cost_; }
  double cost() const {
    return facility_cost_ + static_cast<double>(connection_cost_);
  }
  double scaled_cost() const {
    return kLambda * facility_cost_ + static_cast<double>(connection_cost_);
  }

  // Second-nearest open facility of j. Throws if fewer than two are open.
  Nearest HeapTop(ClientIndex j) const;
  // Heap content in priority order.
  std::vector<Nearest> HeapContents(ClientIndex j) const;

  // weight * f_i * [i not in S] - sum_j max(0, d(j, sigma_j) - d(j, i)).
  // The default weight gives the scaled-cost increment of opening i.
  double DeltaOpen(FacilityId i, double facility_weight = kLambda) const;
  // Opens i if DeltaOpen(i, weight) < 0; returns whether it did.
  bool TryOpen(FacilityId i, double facility_weight = kLambda);
  // Best scaled-cost increment of opening i and closing one open facility.
  // Throws if i is open or nothing is open.
  Candidate DeltaSwapIn(FacilityId i) const;
  // Best scaled-cost increment of closing one facility. With a single open
  // facility only an idle one qualifies. Throws when there is no candidate.
  Candidate DeltaClose() const;

  void Open(FacilityId i);
  // Throws when closing the last open facility while clients remain.
  void Close(FacilityId i);
  void Swap(FacilityId in, FacilityId out);

  // Adds a client registered in the instance. Throws if nothing is open.
  void AddClient(ClientIndex j);
  void RemoveClient(ClientIndex j);

  // One randomized iteration: with probability 1/3 the best close, otherwise
  // the better of opening or swapping in a uniformly random closed facility.
  // Applies the move only if it lowers the scaled cost.
  Move SampledLocalSearch(Rng& rng);

  // Runs `iterations` sampled iterations and installs the solution with the
  // lowest original cost seen (including the starting one).
  IterateResult FlIterate(std::int64_t iterations, Rng& rng);

  // S and sigma as a Solution (no frozen archive).
  Solution ToSolution() const;

 private:
  using Heap = std::set<std::pair<Distance, FacilityId>>;

  const Instance* instance_;
  std::vector<char> open_;
  int num_open_ = 0;
  double facility_cost_ = 0.0;
  Distance connection_cost_ = 0;
  std::vector<ClientIndex> clients_;
  std::vector<int> slot_of_;
  std::vector<FacilityId> sigma_;
  std::vector<Heap> heaps_;
};

const char* MoveName(SearchState::Move move);

}  // namespace dynfl

#endif  // DYNFL_RANDOMIZED_SEARCH_H_
