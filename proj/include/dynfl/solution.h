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

#ifndef DYNFL_SOLUTION_H_
#define DYNFL_SOLUTION_H_

#include <cstdint>
#include <span>
#include <vector>

#include "dynfl/instance.h"
#include "dynfl/types.h"

namespace dynfl {

// A client whose connection was made permanent when a stage ended.
struct FrozenClient {
  ClientIndex client = 0;
  FacilityId facility = kNoFacility;
  Distance distance = 0;
  int stage = 0;

  bool operator==(const FrozenClient&) const = default;
};

// The open set S, the assignment of active clients, and the append-only
// archive of frozen clients and frozen facility copies.
//
// Every mutation of S or of the assignment bumps version(), which lets callers
// detect operations computed against an older state.
class Solution {
 public:
  Solution() = default;
  explicit Solution(int num_facilities);

  int num_facilities() const { return static_cast<int>(open_.size()); }
  bool is_open(FacilityId i) const { return open_[i] != 0; }
  int num_open() const { return num_open_; }
  // Ascending ids.
  std::vector<FacilityId> OpenFacilities() const;
  void Open(FacilityId i);
  void Close(FacilityId i);

  bool is_active(ClientIndex j) const {
    return j >= 0 && j < static_cast<int>(assignment_.size()) &&
           assignment_[j] != kNoFacility;
  }
  // kNoFacility for clients that are not active.
  FacilityId assignment(ClientIndex j) const {
    return is_active(j) ? assignment_[j] : kNoFacility;
  }
  std::span<const ClientIndex> active_clients() const { return active_; }
  int num_active() const { return static_cast<int>(active_.size()); }

  // Activates j if needed. Throws if i is closed or j is frozen.
  void Assign(ClientIndex j, FacilityId i);
  void Deactivate(ClientIndex j);
  // Active clients currently assigned to i, in activation order.
  std::vector<ClientIndex> ServedBy(FacilityId i) const;

  // Archives j at the given connection and removes it from the active set.
  void FreezeClient(ClientIndex j, FacilityId i, Distance d, int stage);
  void FreezeFacilityCopy(FacilityId i, double cost);
  bool is_frozen(ClientIndex j) const {
    return j >= 0 && j < static_cast<int>(frozen_flag_.size()) &&
           frozen_flag_[j] != 0;
  }
  std::span<const FrozenClient> frozen_clients() const { return frozen_; }
  std::span<const FacilityId> frozen_facilities() const {
    return frozen_facilities_;
  }
  double frozen_facility_cost() const { return frozen_facility_cost_; }
  Distance frozen_connection_cost() const { return frozen_connection_cost_; }

  std::uint64_t version() const { return version_; }

 private:
  void Grow(ClientIndex j);

  std::vector<char> open_;
  int num_open_ = 0;
  std::vector<FacilityId> assignment_;
  std::vector<int> active_pos_;
  std::vector<ClientIndex> active_;
  std::vector<char> frozen_flag_;
  std::vector<FrozenClient> frozen_;
  std::vector<FacilityId> frozen_facilities_;
  double frozen_facility_cost_ = 0.0;
  Distance frozen_connection_cost_ = 0;
  std::uint64_t version_ = 0;
};

struct CostReport {
  double facility_cost = 0.0;
  Distance connection_cost = 0;
  // facility_cost + connection_cost.
  double total = 0.0;
  // kLambda * facility_cost + connection_cost.
  double scaled = 0.0;
  double frozen_cost = 0.0;
  // total + frozen_cost.
  double grand_total = 0.0;
  // Like grand_total, but each physical facility in S or in the frozen archive
  // is paid once.
  double physical_total = 0.0;
};

// Throws Error if an active client is assigned to a closed facility.
CostReport Cost(const Solution& solution, const Instance& instance);
double ScaledCost(const Solution& solution, const Instance& instance);

struct Nearest {
  FacilityId facility = kNoFacility;
  Distance distance = 0;

  bool operator==(const Nearest&) const = default;
};

// Closest candidate to j; ties go to the smallest facility id. Throws on an
// empty candidate set.
Nearest NearestFacility(const Instance& instance, ClientIndex j,
                        std::span<const FacilityId> candidates);
Nearest NearestOpenFacility(const Instance& instance, ClientIndex j,
                            const Solution& solution);

}  // namespace dynfl

#endif  // DYNFL_SOLUTION_H_
