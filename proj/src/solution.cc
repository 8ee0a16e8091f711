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

#include "dynfl/solution.h"

#include <string>

namespace dynfl {

Solution::Solution(int num_facilities) : open_(num_facilities, 0) {}

std::vector<FacilityId> Solution::OpenFacilities() const {
  std::vector<FacilityId> out;
  out.reserve(num_open_);
  for (FacilityId i = 0; i < num_facilities(); ++i) {
    if (open_[i]) out.push_back(i);
  }
  return out;
}

void Solution::Open(FacilityId i) {
  if (open_[i]) return;
  open_[i] = 1;
  ++num_open_;
  ++version_;
}

void Solution::Close(FacilityId i) {
  if (!open_[i]) return;
  open_[i] = 0;
  --num_open_;
  ++version_;
}

void Solution::Grow(ClientIndex j) {
  if (j >= static_cast<int>(assignment_.size())) {
    assignment_.resize(j + 1, kNoFacility);
    active_pos_.resize(j + 1, -1);
    frozen_flag_.resize(j + 1, 0);
  }
}

void Solution::Assign(ClientIndex j, FacilityId i) {
  if (j < 0) throw Error("negative client index");
  if (i < 0 || i >= num_facilities() || !open_[i]) {
    throw Error("assignment of client " + std::to_string(j) +
                " to closed facility " + std::to_string(i));
  }
  Grow(j);
  if (frozen_flag_[j]) {
    throw Error("client " + std::to_string(j) + " is frozen");
  }
  if (assignment_[j] == kNoFacility) {
    active_pos_[j] = static_cast<int>(active_.size());
    active_.push_back(j);
  }
  assignment_[j] = i;
  ++version_;
}

void Solution::Deactivate(ClientIndex j) {
  if (!is_active(j)) return;
  const int pos = active_pos_[j];
  const ClientIndex last = active_.back();
  active_[pos] = last;
  active_pos_[last] = pos;
  active_.pop_back();
  active_pos_[j] = -1;
  assignment_[j] = kNoFacility;
  ++version_;
}

std::vector<ClientIndex> Solution::ServedBy(FacilityId i) const {
  std::vector<ClientIndex> out;
  for (ClientIndex j : active_) {
    if (assignment_[j] == i) out.push_back(j);
  }
  return out;
}

void Solution::FreezeClient(ClientIndex j, FacilityId i, Distance d,
                            int stage) {
  Deactivate(j);
  Grow(j);
  frozen_flag_[j] = 1;
  frozen_.push_back({j, i, d, stage});
  frozen_connection_cost_ += d;
}

void Solution::FreezeFacilityCopy(FacilityId i, double cost) {
  frozen_facilities_.push_back(i);
  frozen_facility_cost_ += cost;
}

CostReport Cost(const Solution& solution, const Instance& instance) {
  CostReport r;
  std::vector<char> paid(instance.num_facilities(), 0);
  for (FacilityId i = 0; i < solution.num_facilities(); ++i) {
    if (solution.is_open(i)) {
      r.facility_cost += instance.opening_cost(i);
      paid[i] = 1;
    }
  }
  for (ClientIndex j : solution.active_clients()) {
    const FacilityId i = solution.assignment(j);
    if (!solution.is_open(i)) {
      throw Error("client " + std::to_string(j) +
                  " is assigned to closed facility " + std::to_string(i));
    }
    r.connection_cost += instance.distance(j, i);
  }
  r.total = r.facility_cost + static_cast<double>(r.connection_cost);
  r.scaled = kLambda * r.facility_cost + static_cast<double>(r.connection_cost);
  r.frozen_cost = solution.frozen_facility_cost() +
                  static_cast<double>(solution.frozen_connection_cost());
  r.grand_total = r.total + r.frozen_cost;

  double physical_facilities = r.facility_cost;
  for (FacilityId i : solution.frozen_facilities()) {
    if (!paid[i]) {
      paid[i] = 1;
      physical_facilities += instance.opening_cost(i);
    }
  }
  r.physical_total = physical_facilities +
                     static_cast<double>(r.connection_cost) +
                     static_cast<double>(solution.frozen_connection_cost());
  return r;
}

double ScaledCost(const Solution& solution, const Instance& instance) {
  return Cost(solution, instance).scaled;
}

Nearest NearestFacility(const Instance& instance, ClientIndex j,
                        std::span<const FacilityId> candidates) {
  if (candidates.empty()) throw Error("nearest facility of an empty set");
  Nearest best{candidates[0], instance.distance(j, candidates[0])};
  for (FacilityId i : candidates.subspan(1)) {
    const Distance d = instance.distance(j, i);
    if (d < best.distance || (d == best.distance && i < best.facility)) {
      best = {i, d};
    }
  }
  return best;
}

Nearest NearestOpenFacility(const Instance& instance, ClientIndex j,
                            const Solution& solution) {
  Nearest best;
  for (FacilityId i = 0; i < solution.num_facilities(); ++i) {
    if (!solution.is_open(i)) continue;
    const Distance d = instance.distance(j, i);
    if (best.facility == kNoFacility || d < best.distance) best = {i, d};
  }
  if (best.facility == kNoFacility) {
    throw Error("nearest open facility with no facility open");
  }
  return best;
}

}  // namespace dynfl
