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

#ifndef DYNFL_TYPES_H_
#define DYNFL_TYPES_H_

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace dynfl {

// Facility ids are dense in [0, |F|).
using FacilityId = int;
// Clients are addressed by the dense index assigned on arrival.
using ClientIndex = int;
using Distance = std::int64_t;

inline constexpr FacilityId kNoFacility = -1;

// Every randomized component draws from one generator seeded per run.
using Rng = std::mt19937_64;

// Facility-cost scaling used by local search, and the matching ratio 1 + lambda.
inline constexpr double kLambda = 1.41421356237309504880;
inline constexpr double kAlphaFL = 1.0 + kLambda;

// Absolute tolerance for every cost comparison.
inline constexpr double kCostTolerance = 1e-9;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dynfl

#endif  // DYNFL_TYPES_H_
