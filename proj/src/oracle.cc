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

#include "dynfl/oracle.h"

#include <algorithm>
#include <limits>
#include <string>

namespace dynfl {

namespace {

class SubsetSearch {
 public:
  SubsetSearch(std::span<const double> costs, std::span<const Distance> dist,
               std::span<const std::int64_t> weight)
      : costs_(costs),
        dist_(dist),
        weight_(weight),
        nf_(static_cast<int>(costs.size())),
        nc_(static_cast<int>(weight.size())),
        mins_((nf_ + 1) * static_cast<size_t>(nc_),
              std::numeric_limits<Distance>::max()),
        chosen_(nf_, 0),
        best_open_(nf_, 0) {}

  void Run() { Visit(0, 0.0, false); }

  double best_cost() const { return best_cost_; }
  const std::vector<char>& best_open() const { return best_open_; }

 private:
  Distance* Mins(int depth) { return mins_.data() + depth * static_cast<size_t>(nc_); }

  void Visit(int depth, double facility_cost, bool any_open) {
    if (depth == nf_) {
      if (!any_open && nc_ > 0) return;
      double total = facility_cost;
      const Distance* m = Mins(depth);
      for (int j = 0; j < nc_; ++j) {
        total += static_cast<double>(weight_[j]) * static_cast<double>(m[j]);
      }
      if (total < best_cost_ - kCostTolerance) {
        best_cost_ = total;
        best_open_ = chosen_;
      }
      return;
    }
    const Distance* cur = Mins(depth);
    Distance* next = Mins(depth + 1);
    std::copy(cur, cur + nc_, next);
    Visit(depth + 1, facility_cost, any_open);
    for (int j = 0; j < nc_; ++j) {
      next[j] = std::min(cur[j], dist_[static_cast<size_t>(j) * nf_ + depth]);
    }
    chosen_[depth] = 1;
    Visit(depth + 1, facility_cost + costs_[depth], true);
    chosen_[depth] = 0;
  }

  std::span<const double> costs_;
  std::span<const Distance> dist_;
  std::span<const std::int64_t> weight_;
  int nf_;
  int nc_;
  std::vector<Distance> mins_;
  std::vector<char> chosen_;
  std::vector<char> best_open_;
  double best_cost_ = std::numeric_limits<double>::infinity();
};

}  // namespace

OracleResult ExhaustiveOpt(std::span<const double> costs,
                           std::span<const Distance> dist,
                           std::span<const std::int64_t> weight) {
  const int nf = static_cast<int>(costs.size());
  if (nf > kMaxOracleFacilities) {
    throw Error("oracle limited to " + std::to_string(kMaxOracleFacilities) +
                " facilities, got " + std::to_string(nf));
  }
  if (dist.size() != weight.size() * costs.size()) {
    throw Error("oracle distance table has the wrong size");
  }
  if (nf == 0 && !weight.empty()) throw Error("clients but no facility");
  SubsetSearch search(costs, dist, weight);
  search.Run();
  OracleResult r;
  r.cost = search.best_cost();
  for (FacilityId i = 0; i < nf; ++i) {
    if (search.best_open()[i]) r.open.push_back(i);
  }
  for (size_t j = 0; j < weight.size(); ++j) {
    FacilityId best = kNoFacility;
    for (FacilityId i : r.open) {
      if (best == kNoFacility || dist[j * nf + i] < dist[j * nf + best]) {
        best = i;
      }
    }
    r.assignment.push_back(best);
  }
  return r;
}

OracleResult BruteForceOpt(const Instance& instance,
                           std::span<const ClientIndex> clients) {
  const int nf = instance.num_facilities();
  std::vector<Distance> dist;
  dist.reserve(clients.size() * nf);
  for (ClientIndex j : clients) {
    const auto row = instance.client_distances(j);
    dist.insert(dist.end(), row.begin(), row.end());
  }
  const std::vector<std::int64_t> weight(clients.size(), 1);
  return ExhaustiveOpt(instance.opening_costs(), dist, weight);
}

OracleResult BruteForceOptCollocated(const Instance& instance,
                                     std::span<const std::int64_t> count) {
  const int nf = instance.num_facilities();
  if (static_cast<int>(count.size()) != nf) {
    throw Error("one client count per facility expected");
  }
  std::vector<Distance> dist;
  std::vector<std::int64_t> weight;
  for (FacilityId at = 0; at < nf; ++at) {
    if (count[at] == 0) continue;
    for (FacilityId i = 0; i < nf; ++i) {
      dist.push_back(instance.facility_distance(at, i));
    }
    weight.push_back(count[at]);
  }
  OracleResult r = ExhaustiveOpt(instance.opening_costs(), dist, weight);
  r.assignment.clear();
  return r;
}

double OracleCost(const Instance& instance,
                  std::span<const ClientIndex> clients) {
  return BruteForceOpt(instance, clients).cost;
}

}  // namespace dynfl
