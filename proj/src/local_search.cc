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

#include "dynfl/local_search.h"

#include <string>

namespace dynfl {
namespace {

// Nearest and second-nearest open facility for every active client, in the
// order of solution.active_clients().
struct OpenNeighbors {
  std::vector<Nearest> first;
  std::vector<Nearest> second;
};

bool Closer(const Nearest& a, const Nearest& b) {
  if (b.facility == kNoFacility) return a.facility != kNoFacility;
  if (a.facility == kNoFacility) return false;
  return a.distance < b.distance ||
         (a.distance == b.distance && a.facility < b.facility);
}

OpenNeighbors ComputeOpenNeighbors(const Instance& instance,
                                   const Solution& solution) {
  const auto open = solution.OpenFacilities();
  const auto clients = solution.active_clients();
  OpenNeighbors out;
  out.first.resize(clients.size());
  out.second.resize(clients.size());
  for (size_t k = 0; k < clients.size(); ++k) {
    Nearest a, b;
    for (FacilityId i : open) {
      const Nearest c{i, instance.distance(clients[k], i)};
      if (Closer(c, a)) {
        b = a;
        a = c;
      } else if (Closer(c, b)) {
        b = c;
      }
    }
    out.first[k] = a;
    out.second[k] = b;
  }
  return out;
}

std::optional<LocalOp> OpenImpl(const Instance& instance,
                                const Solution& solution, FacilityId i,
                                double phi) {
  LocalOp op;
  op.kind = OpKind::kOpen;
  op.open_id = i;
  op.solution_version = solution.version();
  double delta = solution.is_open(i) ? 0.0 : kLambda * instance.opening_cost(i);
  for (ClientIndex j : solution.active_clients()) {
    const Distance current = instance.distance(j, solution.assignment(j));
    const Distance there = instance.distance(j, i);
    if (static_cast<double>(there) + phi < static_cast<double>(current)) {
      delta -= static_cast<double>(current - there);
      op.reconnections.push_back({j, i});
    }
  }
  op.scaled_delta = delta;
  if (!IsEfficient(delta, static_cast<std::int64_t>(op.reconnections.size()),
                   phi)) {
    return std::nullopt;
  }
  return op;
}

std::optional<LocalOp> CloseImpl(const Instance& instance,
                                 const Solution& solution,
                                 const OpenNeighbors& nb, FacilityId close,
                                 double phi) {
  LocalOp op;
  op.kind = OpKind::kClose;
  op.close_id = close;
  op.solution_version = solution.version();
  double delta = -kLambda * instance.opening_cost(close);
  const auto clients = solution.active_clients();
  for (size_t k = 0; k < clients.size(); ++k) {
    const ClientIndex j = clients[k];
    if (solution.assignment(j) != close) continue;
    const Nearest& alt =
        nb.first[k].facility == close ? nb.second[k] : nb.first[k];
    delta += static_cast<double>(alt.distance - instance.distance(j, close));
    op.reconnections.push_back({j, alt.facility});
  }
  op.scaled_delta = delta;
  if (!IsEfficient(delta, static_cast<std::int64_t>(op.reconnections.size()),
                   phi)) {
    return std::nullopt;
  }
  return op;
}

std::optional<LocalOp> SwapImpl(const Instance& instance,
                                const Solution& solution,
                                const OpenNeighbors& nb, FacilityId open,
                                FacilityId close, double phi) {
  LocalOp op;
  op.kind = OpKind::kSwap;
  op.open_id = open;
  op.close_id = close;
  op.solution_version = solution.version();
  double delta =
      kLambda * (instance.opening_cost(open) - instance.opening_cost(close));
  const auto clients = solution.active_clients();
  for (size_t k = 0; k < clients.size(); ++k) {
    const ClientIndex j = clients[k];
    const FacilityId current = solution.assignment(j);
    const Distance d_current = instance.distance(j, current);
    const Nearest to_open{open, instance.distance(j, open)};
    if (current == close) {
      Nearest target =
          nb.first[k].facility == close ? nb.second[k] : nb.first[k];
      if (Closer(to_open, target)) target = to_open;
      delta += static_cast<double>(target.distance - d_current);
      op.reconnections.push_back({j, target.facility});
    } else if (static_cast<double>(to_open.distance) + phi <
               static_cast<double>(d_current)) {
      delta -= static_cast<double>(d_current - to_open.distance);
      op.reconnections.push_back({j, open});
    }
  }
  op.scaled_delta = delta;
  if (!IsEfficient(delta, static_cast<std::int64_t>(op.reconnections.size()),
                   phi)) {
    return std::nullopt;
  }
  return op;
}

bool ServesClients(const Solution& solution, FacilityId i) {
  for (ClientIndex j : solution.active_clients()) {
    if (solution.assignment(j) == i) return true;
  }
  return false;
}

void CheckPhi(double phi) {
  if (!(phi >= 0.0)) throw Error("phi must be nonnegative");
}

}  // namespace

const char* OpKindName(OpKind kind) {
  switch (kind) {
    case OpKind::kOpen:
      return "open";
    case OpKind::kClose:
      return "close";
    case OpKind::kSwap:
      return "swap";
  }
  return "?";
}

std::optional<LocalOp> FindEfficientOpen(const Instance& instance,
                                         const Solution& solution, FacilityId i,
                                         double phi) {
  CheckPhi(phi);
  return OpenImpl(instance, solution, i, phi);
}

std::optional<LocalOp> FindEfficientClose(const Instance& instance,
                                          const Solution& solution,
                                          FacilityId close, double phi) {
  CheckPhi(phi);
  if (!solution.is_open(close)) {
    throw Error("close of facility " + std::to_string(close) +
                " which is not open");
  }
  if (solution.num_open() == 1 && ServesClients(solution, close)) {
    throw Error("cannot close the only open facility while it serves clients");
  }
  return CloseImpl(instance, solution, ComputeOpenNeighbors(instance, solution),
                   close, phi);
}

std::optional<LocalOp> FindEfficientSwap(const Instance& instance,
                                         const Solution& solution,
                                         FacilityId open, FacilityId close,
                                         double phi) {
  CheckPhi(phi);
  if (solution.is_open(open)) {
    throw Error("swap-in of facility " + std::to_string(open) +
                " which is already open");
  }
  if (!solution.is_open(close)) {
    throw Error("swap-out of facility " + std::to_string(close) +
                " which is not open");
  }
  return SwapImpl(instance, solution, ComputeOpenNeighbors(instance, solution),
                  open, close, phi);
}

std::optional<LocalOp> FindAnyEfficientOp(const Instance& instance,
                                          const Solution& solution,
                                          double phi) {
  CheckPhi(phi);
  if (solution.num_active() == 0 && solution.num_open() == 0) {
    return std::nullopt;
  }
  const int nf = instance.num_facilities();
  for (FacilityId i = 0; i < nf; ++i) {
    if (auto op = OpenImpl(instance, solution, i, phi)) return op;
  }
  const OpenNeighbors nb = ComputeOpenNeighbors(instance, solution);
  const auto open = solution.OpenFacilities();
  for (FacilityId close : open) {
    if (open.size() == 1 && ServesClients(solution, close)) continue;
    if (auto op = CloseImpl(instance, solution, nb, close, phi)) return op;
  }
  for (FacilityId in = 0; in < nf; ++in) {
    if (solution.is_open(in)) continue;
    for (FacilityId close : open) {
      if (auto op = SwapImpl(instance, solution, nb, in, close, phi)) {
        return op;
      }
    }
  }
  return std::nullopt;
}

Recourse ApplyOp(Solution& solution, const LocalOp& op) {
  if (op.solution_version != solution.version()) {
    throw Error("stale local operation: solution changed since it was found");
  }
  Recourse r;
  bool open_gained = false;
  bool close_lost = false;
  const bool opens = op.open_id && !solution.is_open(*op.open_id);
  if (opens) solution.Open(*op.open_id);
  for (const auto& rc : op.reconnections) {
    const FacilityId from = solution.assignment(rc.client);
    if (from == rc.to) continue;
    close_lost |= op.close_id && from == *op.close_id;
    open_gained |= op.open_id && rc.to == *op.open_id;
    solution.Assign(rc.client, rc.to);
    ++r.client;
  }
  if (opens) {
    ++r.facility;
    r.idle_facility += !open_gained;
  }
  if (op.close_id) {
    solution.Close(*op.close_id);
    ++r.facility;
    r.idle_facility += !close_lost;
  }
  return r;
}

ConvergeResult Converge(const Instance& instance, Solution& solution,
                        double phi) {
  return Converge(instance, solution, [phi] { return phi; });
}

ConvergeResult Converge(const Instance& instance, Solution& solution,
                        const std::function<double()>& phi) {
  ConvergeResult result;
  while (auto op = FindAnyEfficientOp(instance, solution, phi())) {
    result.recourse += ApplyOp(solution, *op);
    ++result.iterations;
  }
  return result;
}

}  // namespace dynfl
