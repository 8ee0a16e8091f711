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

#include "dynfl/instance.h"

#include <algorithm>
#include <cmath>

namespace dynfl {

Instance::Instance(std::vector<double> opening_costs,
                   std::vector<std::vector<Distance>> facility_distances)
    : costs_(std::move(opening_costs)) {
  const size_t n = costs_.size();
  if (facility_distances.size() != n) {
    throw Error("facility distance matrix has " +
                std::to_string(facility_distances.size()) + " rows, expected " +
                std::to_string(n));
  }
  for (double c : costs_) {
    if (!(c >= 0.0) || !std::isfinite(c)) {
      throw Error("opening costs must be finite and nonnegative");
    }
  }
  fdist_.resize(n * n);
  for (size_t a = 0; a < n; ++a) {
    if (facility_distances[a].size() != n) {
      throw Error("facility distance matrix is not square");
    }
    for (size_t b = 0; b < n; ++b) {
      const Distance d = facility_distances[a][b];
      if (d < 0) throw Error("negative facility distance");
      if (a == b && d != 0) throw Error("nonzero diagonal in facility matrix");
      fdist_[a * n + b] = d;
      diameter_ = std::max(diameter_, d);
    }
  }
  for (size_t a = 0; a < n; ++a) {
    for (size_t b = a + 1; b < n; ++b) {
      if (fdist_[a * n + b] != fdist_[b * n + a]) {
        throw Error("asymmetric facility distance matrix");
      }
    }
  }
}

ClientIndex Instance::AddClient(std::string name,
                                std::span<const Distance> dist) {
  if (dist.size() != costs_.size()) {
    throw Error("client '" + name + "' has " + std::to_string(dist.size()) +
                " distances, expected " + std::to_string(costs_.size()));
  }
  if (client_by_name_.contains(name)) {
    throw Error("duplicate client '" + name + "'");
  }
  for (Distance d : dist) {
    if (d < 0) throw Error("negative distance for client '" + name + "'");
    diameter_ = std::max(diameter_, d);
  }
  const auto j = static_cast<ClientIndex>(client_names_.size());
  cdist_.insert(cdist_.end(), dist.begin(), dist.end());
  client_by_name_.emplace(name, j);
  client_names_.push_back(std::move(name));
  return j;
}

ClientIndex Instance::AddCollocatedClient(std::string name, FacilityId at) {
  if (at < 0 || at >= num_facilities()) {
    throw Error("client '" + name + "' refers to unknown facility " +
                std::to_string(at));
  }
  const size_t n = costs_.size();
  std::vector<Distance> row(fdist_.begin() + at * n,
                            fdist_.begin() + (at + 1) * n);
  return AddClient(std::move(name), row);
}

std::optional<ClientIndex> Instance::FindClient(const std::string& name) const {
  auto it = client_by_name_.find(name);
  if (it == client_by_name_.end()) return std::nullopt;
  return it->second;
}

bool Instance::SatisfiesTriangleInequality() const {
  const int n = num_facilities();
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      for (int c = 0; c < n; ++c) {
        if (facility_distance(a, c) >
            facility_distance(a, b) + facility_distance(b, c)) {
          return false;
        }
      }
    }
  }
  for (ClientIndex j = 0; j < num_clients(); ++j) {
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        if (distance(j, a) > distance(j, b) + facility_distance(b, a) ||
            facility_distance(a, b) > distance(j, a) + distance(j, b)) {
          return false;
        }
      }
    }
  }
  return true;
}

}  // namespace dynfl
