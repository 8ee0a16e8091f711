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

#ifndef DYNFL_INSTANCE_H_
#define DYNFL_INSTANCE_H_

#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "dynfl/types.h"

namespace dynfl {

// Facilities with opening costs, the facility metric, and every client that
// has arrived so far together with its distance vector to F. Clients are never
// removed: departed or frozen clients keep their index.
class Instance {
 public:
  Instance() = default;

  // Throws Error when the matrix is not square, not symmetric, has a nonzero
  // diagonal or negative entries, or when a cost is negative.
  Instance(std::vector<double> opening_costs,
           std::vector<std::vector<Distance>> facility_distances);

  int num_facilities() const { return static_cast<int>(costs_.size()); }
  int num_clients() const { return static_cast<int>(client_names_.size()); }

  double opening_cost(FacilityId i) const { return costs_[i]; }
  std::span<const double> opening_costs() const { return costs_; }

  Distance facility_distance(FacilityId a, FacilityId b) const {
    return fdist_[static_cast<size_t>(a) * costs_.size() + b];
  }

  Distance distance(ClientIndex j, FacilityId i) const {
    return cdist_[static_cast<size_t>(j) * costs_.size() + i];
  }
  std::span<const Distance> client_distances(ClientIndex j) const {
    return {cdist_.data() + static_cast<size_t>(j) * costs_.size(),
            costs_.size()};
  }

  // Registers a client and returns its dense index. Throws on a wrong-length
  // or negative vector and on a name that is already registered.
  ClientIndex AddClient(std::string name, std::span<const Distance> dist);

  // A client collocated with facility `at`: its vector is row `at` of the
  // facility metric.
  ClientIndex AddCollocatedClient(std::string name, FacilityId at);

  const std::string& client_name(ClientIndex j) const {
    return client_names_[j];
  }
  std::optional<ClientIndex> FindClient(const std::string& name) const;

  // Largest distance observed over F and the clients added so far.
  Distance diameter() const { return diameter_; }

  // Checks the triangle inequality over F and over every (client, facility,
  // facility) triple; client-client distances are never needed.
  bool SatisfiesTriangleInequality() const;

 private:
  std::vector<double> costs_;
  std::vector<Distance> fdist_;
  std::vector<Distance> cdist_;
  std::vector<std::string> client_names_;
  std::unordered_map<std::string, ClientIndex> client_by_name_;
  Distance diameter_ = 0;
};

}  // namespace dynfl

#endif  // DYNFL_INSTANCE_H_
