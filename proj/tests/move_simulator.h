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


#ifndef DYNFL_TESTS_MOVE_SIMULATOR_H_
#define DYNFL_TESTS_MOVE_SIMULATOR_H_

#include <vector>

#include "dynfl/instance.h"
#include "dynfl/solution.h"
#include "dynfl/types.h"

namespace dynfl::testing {

// Plain-data reimplementation of the move family: each candidate move is
// simulated by building the full post-move assignment and pricing it.
struct SimMove {
  double scaled_delta;
  int reconnections;
};

struct Sim {
  const Instance* instance;
  std::vector<char> open;
  std::vector<ClientIndex> clients;
  std::vector<FacilityId> sigma;

  double Scaled(const std::vector<char>& s,
                const std::vector<FacilityId>& a) const {
    double total = 0.0;
    for (size_t i = 0; i < s.size(); ++i) {
      if (s[i]) total += kLambda * instance->opening_cost(i);
    }
    for (size_t k = 0; k < clients.size(); ++k) {
      total += static_cast<double>(instance->distance(clients[k], a[k]));
    }
    return total;
  }

  FacilityId Closest(ClientIndex j, const std::vector<char>& s) const {
    FacilityId best = kNoFacility;
    for (size_t i = 0; i < s.size(); ++i) {
      if (!s[i]) continue;
      if (best == kNoFacility ||
          instance->distance(j, i) < instance->distance(j, best)) {
        best = static_cast<FacilityId>(i);
      }
    }
    return best;
  }

  SimMove Price(const std::vector<char>& s,
                const std::vector<FacilityId>& a) const {
    int moved = 0;
    for (size_t k = 0; k < clients.size(); ++k) moved += a[k] != sigma[k];
    return {Scaled(s, a) - Scaled(open, sigma), moved};
  }

  SimMove Open(FacilityId i, double phi) const {
    auto s = open;
    s[i] = 1;
    auto a = sigma;
    for (size_t k = 0; k < clients.size(); ++k) {
      const ClientIndex j = clients[k];
      if (static_cast<double>(instance->distance(j, i)) + phi <
          static_cast<double>(instance->distance(j, sigma[k]))) {
        a[k] = i;
      }
    }
    return Price(s, a);
  }

  SimMove Close(FacilityId c) const {
    auto s = open;
    s[c] = 0;
    auto a = sigma;
    for (size_t k = 0; k < clients.size(); ++k) {
      if (sigma[k] == c) a[k] = Closest(clients[k], s);
    }
    return Price(s, a);
  }

  SimMove Swap(FacilityId in, FacilityId out, double phi) const {
    auto s = open;
    s[in] = 1;
    s[out] = 0;
    auto a = sigma;
    for (size_t k = 0; k < clients.size(); ++k) {
      const ClientIndex j = clients[k];
      if (sigma[k] == out) {
        a[k] = Closest(j, s);
      } else if (static_cast<double>(instance->distance(j, in)) + phi <
                 static_cast<double>(instance->distance(j, sigma[k]))) {
        a[k] = in;
      }
    }
    return Price(s, a);
  }

  static bool Efficient(const SimMove& m, double phi) {
    return m.scaled_delta < -phi * m.reconnections - kCostTolerance;
  }

  // True when any move of the family is phi-efficient.
  bool AnyEfficient(double phi) const {
    const int nf = static_cast<int>(open.size());
    int num_open = 0;
    for (char o : open) num_open += o;
    for (int i = 0; i < nf; ++i) {
      if (Efficient(Open(i, phi), phi)) return true;
    }
    for (int c = 0; c < nf; ++c) {
      if (!open[c]) continue;
      bool serves = false;
      for (FacilityId f : sigma) serves |= f == c;
      if (num_open == 1 && serves) continue;
      if (Efficient(Close(c), phi)) return true;
      for (int i = 0; i < nf; ++i) {
        if (!open[i] && Efficient(Swap(i, c, phi), phi)) return true;
      }
    }
    return false;
  }
};

inline Sim FromSolution(const Instance& instance, const Solution& s) {
  Sim sim{&instance, std::vector<char>(instance.num_facilities(), 0), {}, {}};
  for (FacilityId i : s.OpenFacilities()) sim.open[i] = 1;
  for (ClientIndex j : s.active_clients()) {
    sim.clients.push_back(j);
    sim.sigma.push_back(s.assignment(j));
  }
  return sim;
}

}  // namespace dynfl::testing

#endif  // DYNFL_TESTS_MOVE_SIMULATOR_H_
