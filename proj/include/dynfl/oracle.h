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

#ifndef DYNFL_ORACLE_H_
#define DYNFL_ORACLE_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dynfl/instance.h"
#include "dynfl/types.h"

namespace dynfl {

inline constexpr int kMaxOracleFacilities = 20;

struct OracleResult {
  double cost = 0.0;
  // Ascending ids.
  std::vector<FacilityId> open;
  // Nearest open facility of each queried client, in query order.
  std::vector<FacilityId> assignment;
  std::string method = "exhaustive-subsets";
};

// Exact optimum by enumerating every nonempty subset of F (the empty set only
// when there is no client). `dist` is row-major, one row of |F| entries per
// client, and `weight` gives the multiplicity of each row. Throws Error when
// |F| exceeds kMaxOracleFacilities.
OracleResult ExhaustiveOpt(std::span<const double> costs,
                           std::span<const Distance> dist,
                           std::span<const std::int64_t> weight);

OracleResult BruteForceOpt(const Instance& instance,
                           std::span<const ClientIndex> clients);

// count[i] clients sitting on facility i, priced with the facility metric.
// The assignment field is left empty.
OracleResult BruteForceOptCollocated(const Instance& instance,
                                     std::span<const std::int64_t> count);

// Optimal cost only; fits the oracle hook of the run drivers.
double OracleCost(const Instance& instance,
                  std::span<const ClientIndex> clients);

}  // namespace dynfl

#endif  // DYNFL_ORACLE_H_
