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

#ifndef DYNFL_EVENT_STREAM_H_
#define DYNFL_EVENT_STREAM_H_

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dynfl/instance.h"
#include "dynfl/types.h"

namespace dynfl {

enum class EventKind { kArrive, kDepart };

// One line of the input stream. Arrivals carry either a full distance vector
// or, for tree-metric runs, the id of the client's nearest facility.
struct Event {
  EventKind kind = EventKind::kArrive;
  std::string client;
  std::vector<Distance> dist;
  std::optional<FacilityId> nearest;

  bool operator==(const Event&) const = default;
};

// The parsed input: an instance holding only facilities (clients are added by
// the algorithms as they arrive) and the validated event sequence.
struct LoadedInput {
  Instance instance;
  std::vector<Event> events;

  int num_arrivals() const;
  bool has_departures() const;
  // |F| plus the number of arrivals.
  int n() const { return instance.num_facilities() + num_arrivals(); }
};

// Reads the line-delimited JSON format: a header record followed by arrive and
// depart records. Throws Error on a malformed record, a bad matrix, a
// non-integer distance, a duplicate live arrival, or a depart of an unknown
// client. Triangle-inequality validation is optional.
LoadedInput LoadInput(std::istream& in, bool validate_metric = false);
LoadedInput LoadInputFile(const std::string& path,
                          bool validate_metric = false);

void WriteInput(std::ostream& out, const Instance& instance,
                const std::vector<Event>& events);

// Registers an arrival's client in `instance`. Arrivals that only name their
// nearest facility become collocated with it.
ClientIndex RegisterArrival(Instance& instance, const Event& event);

}  // namespace dynfl

#endif  // DYNFL_EVENT_STREAM_H_
