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

#include "dynfl/randomized_search.h"

#include <algorithm>
#include <limits>
#include <string>

namespace dynfl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

const char* MoveName(SearchState::Move move) {
  switch (move) {
    case SearchState::Move::kNone:
      return "none";
    case SearchState::Move::kOpen:
      return "open";
    case SearchState::Move::kClose:
      return "close";
    case SearchState::Move::kSwap:
      return "swap";
  }
  return "?";
}

SearchState::SearchState(const Instance& instance)
    : instance_(&instance), open_(instance.num_facilities(), 0) {}

void SearchState::Reset(std::span<const FacilityId> open,
                        std::span<const ClientIndex> clients) {
  const std::vector<ClientIndex> keep(clients.begin(), clients.end());
  std::fill(open_.begin(), open_.end(), 0);
  num_open_ = 0;
  facility_cost_ = 0.0;
  connection_cost_ = 0;
  clients_.clear();
  sigma_.clear();
  heaps_.clear();
  std::fill(slot_of_.begin(), slot_of_.end(), -1);
  for (FacilityId i : open) Open(i);
  for (ClientIndex j : keep) AddClient(j);
}

std::vector<FacilityId> SearchState::OpenFacilities() const {
  std::vector<FacilityId> out;
  out.reserve(num_open_);
  for (FacilityId i = 0; i < static_cast<int>(open_.size()); ++i) {
    if (open_[i]) out.push_back(i);
  }
  return out;
}

Nearest SearchState::HeapTop(ClientIndex j) const {
  if (!has_client(j)) throw Error("unknown client " + std::to_string(j));
  const Heap& heap = heaps_[slot_of_[j]];
  if (heap.empty()) throw Error("heap is empty: fewer than two open facilities");
  return {heap.begin()->second, heap.begin()->first};
}

std::vector<Nearest> SearchState::HeapContents(ClientIndex j) const {
  if (!has_client(j)) throw Error("unknown client " + std::to_string(j));
  std::vector<Nearest> out;
  for (const auto& [d, i] : heaps_[slot_of_[j]]) out.push_back({i, d});
  return out;
}

double SearchState::DeltaOpen(FacilityId i, double facility_weight) const {
  const Instance& inst = *instance_;
  double delta = open_[i] ? 0.0 : facility_weight * inst.opening_cost(i);
  Distance gain = 0;
  for (size_t s = 0; s < clients_.size(); ++s) {
    const ClientIndex j = clients_[s];
    const Distance diff = inst.distance(j, sigma_[s]) - inst.distance(j, i);
    if (diff > 0) gain += diff;
  }
  return delta - static_cast<double>(gain);
}

bool SearchState::TryOpen(FacilityId i, double facility_weight) {
  if (open_[i]) return false;
  if (DeltaOpen(i, facility_weight) < -kCostTolerance) {
    Open(i);
    return true;
  }
  return false;
}

SearchState::Candidate SearchState::DeltaSwapIn(FacilityId i) const {
  if (open_[i]) {
    throw Error("swap-in candidate " + std::to_string(i) + " is already open");
  }
  if (num_open_ == 0) throw Error("swap-in with no open facility");
  const Instance& inst = *instance_;
  // Clients that move to i regardless of which facility closes.
  double psi = kLambda * inst.opening_cost(i);
  std::vector<double> acc(open_.size(), 0.0);
  for (size_t s = 0; s < clients_.size(); ++s) {
    const ClientIndex j = clients_[s];
    const Distance to_i = inst.distance(j, i);
    const Distance cur = inst.distance(j, sigma_[s]);
    if (to_i < cur) {
      psi -= static_cast<double>(cur - to_i);
      continue;
    }
    Distance next = to_i;
    if (!heaps_[s].empty()) next = std::min(next, heaps_[s].begin()->first);
    acc[sigma_[s]] += static_cast<double>(next - cur);
  }
  Candidate best{kInf, kNoFacility};
  for (FacilityId k = 0; k < static_cast<int>(open_.size()); ++k) {
    if (!open_[k]) continue;
    const double delta = psi + acc[k] - kLambda * inst.opening_cost(k);
    if (delta < best.delta) best = {delta, k};
  }
  return best;
}

SearchState::Candidate SearchState::DeltaClose() const {
  const Instance& inst = *instance_;
  std::vector<double> acc(open_.size(), 0.0);
  std::vector<char> serves(open_.size(), 0);
  if (num_open_ >= 2) {
    for (size_t s = 0; s < clients_.size(); ++s) {
      const ClientIndex j = clients_[s];
      acc[sigma_[s]] += static_cast<double>(heaps_[s].begin()->first -
                                            inst.distance(j, sigma_[s]));
    }
  } else {
    for (FacilityId i : sigma_) serves[i] = 1;
  }
  Candidate best{kInf, kNoFacility};
  for (FacilityId k = 0; k < static_cast<int>(open_.size()); ++k) {
    if (!open_[k] || serves[k]) continue;
    const double delta = acc[k] - kLambda * inst.opening_cost(k);
    if (delta < best.delta) best = {delta, k};
  }
  if (best.facility == kNoFacility) throw Error("no facility can be closed");
  return best;
}

void SearchState::Open(FacilityId i) {
  if (open_[i]) return;
  const Instance& inst = *instance_;
  open_[i] = 1;
  ++num_open_;
  facility_cost_ += inst.opening_cost(i);
  for (size_t s = 0; s < clients_.size(); ++s) {
    const ClientIndex j = clients_[s];
    const std::pair<Distance, FacilityId> cand{inst.distance(j, i), i};
    const std::pair<Distance, FacilityId> cur{inst.distance(j, sigma_[s]),
                                              sigma_[s]};
    if (cand < cur) {
      heaps_[s].insert(cur);
      connection_cost_ += cand.first - cur.first;
      sigma_[s] = i;
    } else {
      heaps_[s].insert(cand);
    }
  }
}

void SearchState::Close(FacilityId i) {
  if (!open_[i]) return;
  if (num_open_ == 1 && !clients_.empty()) {
    throw Error("cannot close the last open facility " + std::to_string(i) +
                " while clients are connected");
  }
  const Instance& inst = *instance_;
  open_[i] = 0;
  --num_open_;
  facility_cost_ -= inst.opening_cost(i);
  if (num_open_ == 0) facility_cost_ = 0.0;
  for (size_t s = 0; s < clients_.size(); ++s) {
    const ClientIndex j = clients_[s];
    const Distance d = inst.distance(j, i);
    if (sigma_[s] == i) {
      const auto top = *heaps_[s].begin();
      heaps_[s].erase(heaps_[s].begin());
      connection_cost_ += top.first - d;
      sigma_[s] = top.second;
    } else {
      heaps_[s].erase({d, i});
    }
  }
}

void SearchState::Swap(FacilityId in, FacilityId out) {
  Open(in);
  Close(out);
}

void SearchState::AddClient(ClientIndex j) {
  if (j < 0 || j >= instance_->num_clients()) {
    throw Error("client " + std::to_string(j) + " is not in the instance");
  }
  if (has_client(j)) throw Error("client " + std::to_string(j) + " added twice");
  if (num_open_ == 0) throw Error("client added with no open facility");
  const Instance& inst = *instance_;
  Heap heap;
  for (FacilityId i = 0; i < static_cast<int>(open_.size()); ++i) {
    if (open_[i]) heap.emplace(inst.distance(j, i), i);
  }
  const auto nearest = *heap.begin();
  heap.erase(heap.begin());
  if (j >= static_cast<int>(slot_of_.size())) slot_of_.resize(j + 1, -1);
  slot_of_[j] = static_cast<int>(clients_.size());
  clients_.push_back(j);
  sigma_.push_back(nearest.second);
  heaps_.push_back(std::move(heap));
  connection_cost_ += nearest.first;
}

void SearchState::RemoveClient(ClientIndex j) {
  if (!has_client(j)) return;
  const int s = slot_of_[j];
  connection_cost_ -= instance_->distance(j, sigma_[s]);
  const int last = static_cast<int>(clients_.size()) - 1;
  if (s != last) {
    clients_[s] = clients_[last];
    sigma_[s] = sigma_[last];
    heaps_[s] = std::move(heaps_[last]);
    slot_of_[clients_[s]] = s;
  }
  clients_.pop_back();
  sigma_.pop_back();
  heaps_.pop_back();
  slot_of_[j] = -1;
}

SearchState::Move SearchState::SampledLocalSearch(Rng& rng) {
  std::uniform_int_distribution<int> coin(0, 2);
  if (coin(rng) == 0) {
    if (num_open_ == 0) return Move::kNone;
    if (num_open_ == 1 && !clients_.empty()) return Move::kNone;
    const Candidate close = DeltaClose();
    if (close.delta < -kCostTolerance) {
      Close(close.facility);
      return Move::kClose;
    }
    return Move::kNone;
  }
  const int closed = static_cast<int>(open_.size()) - num_open_;
  if (closed == 0) return Move::kNone;
  std::uniform_int_distribution<int> pick(0, closed - 1);
  int r = pick(rng);
  FacilityId i = 0;
  for (; i < static_cast<int>(open_.size()); ++i) {
    if (!open_[i] && r-- == 0) break;
  }
  const double open_delta = DeltaOpen(i);
  Candidate swap{kInf, kNoFacility};
  if (num_open_ > 0) swap = DeltaSwapIn(i);
  if (open_delta <= swap.delta && open_delta < -kCostTolerance) {
    Open(i);
    return Move::kOpen;
  }
  if (swap.delta < -kCostTolerance) {
    Swap(i, swap.facility);
    return Move::kSwap;
  }
  return Move::kNone;
}

SearchState::IterateResult SearchState::FlIterate(std::int64_t iterations,
                                                  Rng& rng) {
  IterateResult result;
  result.initial_cost = cost();
  result.best_cost = result.initial_cost;
  std::vector<FacilityId> best_open = OpenFacilities();
  bool current_is_best = true;
  for (std::int64_t it = 0; it < iterations; ++it) {
    ++result.iterations;
    if (SampledLocalSearch(rng) == Move::kNone) continue;
    ++result.moves;
    current_is_best = false;
    if (cost() < result.best_cost - kCostTolerance) {
      result.best_cost = cost();
      best_open = OpenFacilities();
      current_is_best = true;
    }
  }
  if (!current_is_best) {
    const std::vector<ClientIndex> keep(clients_.begin(), clients_.end());
    Reset(best_open, keep);
  }
  return result;
}

Solution SearchState::ToSolution() const {
  Solution out(static_cast<int>(open_.size()));
  for (FacilityId i = 0; i < static_cast<int>(open_.size()); ++i) {
    if (open_[i]) out.Open(i);
  }
  for (size_t s = 0; s < clients_.size(); ++s) out.Assign(clients_[s], sigma_[s]);
  return out;
}

}  // namespace dynfl
