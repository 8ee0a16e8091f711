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

#ifndef DYNFL_LOCAL_SEARCH_H_
#define DYNFL_LOCAL_SEARCH_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "dynfl/instance.h"
#include "dynfl/solution.h"
#include "dynfl/types.h"

namespace dynfl {

enum class OpKind { kOpen, kClose, kSwap };

const char* OpKindName(OpKind kind);

struct Reconnection {
  ClientIndex client = 0;
  FacilityId to = kNoFacility;
};

// A candidate open, close or swap together with the clients it moves and the
// resulting change of the scaled cost (negative means improvement). The op is
// bound to the solution version it was computed against.
struct LocalOp {
  OpKind kind = OpKind::kOpen;
  std::optional<FacilityId> open_id;
  std::optional<FacilityId> close_id;
  std::vector<Reconnection> reconnections;
  double scaled_delta = 0.0;
  std::uint64_t solution_version = 0;
};

struct Recourse {
  std::int64_t client = 0;
  std::int64_t facility = 0;
  // Facility opens or closes in which the facility gained or lost no client.
  // Each reconnection touches at most two facility changes, so
  // facility - idle_facility <= 2 * client always holds.
  std::int64_t idle_facility = 0;

  Recourse& operator+=(const Recourse& o) {
    client += o.client;
    facility += o.facility;
    idle_facility += o.idle_facility;
    return *this;
  }
};

// True when a move changing the scaled cost by `scaled_delta` and reconnecting
// `reconnections` clients is phi-efficient.
inline bool IsEfficient(double scaled_delta, std::int64_t reconnections,
                        double phi) {
  return scaled_delta <
         -phi * static_cast<double>(reconnections) - kCostTolerance;
}

// Opening i (possibly already open) and moving every client j with
// d(j, i) + phi < d(j, sigma_j). Returns the op only if it is phi-efficient.
std::optional<LocalOp> FindEfficientOpen(const Instance& instance,
                                         const Solution& solution, FacilityId i,
                                         double phi);

// Closing an open facility and moving its clients to their nearest remaining
// open facility. Throws if `close` is not open, or if it is the only open
// facility and still serves clients.
std::optional<LocalOp> FindEfficientClose(const Instance& instance,
                                          const Solution& solution,
                                          FacilityId close, double phi);

// Opening `open` and closing `close`. Clients of `close` move to their nearest
// facility in S - {close} + {open}; any other client that gains more than phi
// by moving to `open` moves as well. Throws unless open is closed and close is
// open.
std::optional<LocalOp> FindEfficientSwap(const Instance& instance,
                                         const Solution& solution,
                                         FacilityId open, FacilityId close,
                                         double phi);

// Scans opens (every facility), then closes (open facilities), then swaps
// (closed x open), each in ascending id order, and returns the first
// phi-efficient operation.
std::optional<LocalOp> FindAnyEfficientOp(const Instance& instance,
                                          const Solution& solution, double phi);

// Applies op to the solution. Throws Error("stale ...") when the solution has
// changed since the op was computed.
Recourse ApplyOp(Solution& solution, const LocalOp& op);

struct ConvergeResult {
  std::int64_t iterations = 0;
  Recourse recourse;
};

// Applies phi-efficient operations until none remains.
ConvergeResult Converge(const Instance& instance, Solution& solution,
                        double phi);
// As above with phi re-evaluated before every search.
ConvergeResult Converge(const Instance& instance, Solution& solution,
                        const std::function<double()>& phi);

}  // namespace dynfl

#endif  // DYNFL_LOCAL_SEARCH_H_
