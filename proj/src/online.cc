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

#include "dynfl/online.h"

#include <chrono>
#include <limits>

namespace dynfl {

InitialConnection InitialConnect(const Instance& instance, Solution& solution,
                                 ClientIndex j) {
  if (instance.num_facilities() == 0) throw Error("instance has no facility");
  FacilityId best_closed = kNoFacility;
  double best_closed_cost = std::numeric_limits<double>::infinity();
  for (FacilityId i = 0; i < instance.num_facilities(); ++i) {
    if (solution.is_open(i)) continue;
    const double c =
        instance.opening_cost(i) + static_cast<double>(instance.distance(j, i));
    if (c < best_closed_cost) {
      best_closed_cost = c;
      best_closed = i;
    }
  }
  if (solution.num_open() == 0) {
    solution.Open(best_closed);
    solution.Assign(j, best_closed);
    return {best_closed_cost, best_closed, true};
  }
  const Nearest nearest = NearestOpenFacility(instance, j, solution);
  if (best_closed != kNoFacility &&
      best_closed_cost < static_cast<double>(nearest.distance)) {
    solution.Open(best_closed);
    solution.Assign(j, best_closed);
    return {best_closed_cost, best_closed, true};
  }
  solution.Assign(j, nearest.facility);
  return {static_cast<double>(nearest.distance), nearest.facility, false};
}

double EfficiencyThreshold(double eps_prime, double cost, int num_clients) {
  if (num_clients <= 0) return 0.0;
  return eps_prime * cost / (kAlphaFL * num_clients);
}

OnlineStage::OnlineStage(const Instance& instance, Solution& solution,
                         double eps_prime)
    : instance_(&instance),
      solution_(&solution),
      eps_prime_(eps_prime),
      init_(Cost(solution, instance).total) {
  const auto clients = solution.active_clients();
  snapshot_.clients.assign(clients.begin(), clients.end());
  snapshot_.open = solution.OpenFacilities();
  snapshot_.assignment.reserve(clients.size());
  for (ClientIndex j : clients) {
    snapshot_.assignment.push_back(solution.assignment(j));
  }
}

OnlineStep OnlineStage::Arrive(ClientIndex j) {
  if (ended_) throw Error("arrival after the stage ended");
  if (solution_->is_active(j)) throw Error("client arrived twice");
  ++time_;
  OnlineStep step;
  step.client = j;
  const InitialConnection ic = InitialConnect(*instance_, *solution_, j);
  step.delta = ic.delta;
  step.opened = ic.opened;
  step.converge = Converge(*instance_, *solution_, [&] {
    step.phi = EfficiencyThreshold(eps_prime_,
                                   Cost(*solution_, *instance_).total,
                                   solution_->num_active());
    return step.phi;
  });
  step.cost_after = Cost(*solution_, *instance_).total;
  if (step.cost_after > init_ / eps_prime_) {
    ended_ = true;
    step.stage_ended = true;
  }
  return step;
}

StageResult RunStage(Instance& instance, std::span<const Event> events,
                     Solution& solution, double eps_prime) {
  StageResult result;
  OnlineStage stage(instance, solution, eps_prime);
  for (const Event& e : events) {
    if (e.kind != EventKind::kArrive) {
      throw Error("online stages accept arrivals only");
    }
    result.steps.push_back(stage.Arrive(RegisterArrival(instance, e)));
    ++result.consumed;
    if (stage.ended()) break;
  }
  result.ended = stage.ended();
  return result;
}

OnlineAlgorithm::OnlineAlgorithm(Instance& instance, double epsilon)
    : instance_(&instance),
      eps_prime_(OnlineEpsPrime(epsilon)),
      solution_(instance.num_facilities()) {
  if (!(epsilon > 0.0)) throw Error("epsilon must be positive");
  stage_ = std::make_unique<OnlineStage>(instance, solution_, eps_prime_);
}

double OnlineAlgorithm::phi() const {
  return EfficiencyThreshold(eps_prime_, Cost(solution_, *instance_).total,
                             solution_.num_active());
}

void OnlineAlgorithm::FreezeSnapshot(const StageSnapshot& snapshot) {
  for (FacilityId i : snapshot.open) {
    solution_.FreezeFacilityCopy(i, instance_->opening_cost(i));
  }
  for (size_t k = 0; k < snapshot.clients.size(); ++k) {
    const ClientIndex j = snapshot.clients[k];
    const FacilityId i = snapshot.assignment[k];
    solution_.FreezeClient(j, i, instance_->distance(j, i), stage_index_);
  }
}

StepRecord OnlineAlgorithm::Arrive(const Event& event) {
  if (event.kind != EventKind::kArrive) {
    throw Error("the online algorithm does not support departures");
  }
  const auto start = std::chrono::steady_clock::now();
  const ClientIndex j = RegisterArrival(*instance_, event);
  arrived_.push_back(j);
  const OnlineStep step = stage_->Arrive(j);
  recourse_ += step.converge.recourse;
  initial_opens_ += step.opened;
  deltas_.push_back(step.delta);

  StepRecord rec;
  rec.t = ++t_;
  rec.event = "arrive";
  rec.stage = stage_index_;
  if (step.stage_ended) {
    FreezeSnapshot(stage_->snapshot());
    ++stage_index_;
    stage_ = std::make_unique<OnlineStage>(*instance_, solution_, eps_prime_);
  }
  const CostReport cost = Cost(solution_, *instance_);
  rec.cost = cost.total;
  rec.frozen_cost = cost.frozen_cost;
  rec.grand_total = cost.grand_total;
  rec.delta_t = step.delta;
  rec.phi = step.phi;
  rec.client_recourse_cum = recourse_.client;
  rec.facility_recourse_cum = recourse_.facility;
  rec.wall_us = std::chrono::duration<double, std::micro>(
                    std::chrono::steady_clock::now() - start)
                    .count();
  return rec;
}

double CompetitiveRatio(double cost, double opt) {
  if (opt <= 0.0) {
    return cost <= kCostTolerance ? 1.0
                                  : std::numeric_limits<double>::infinity();
  }
  return cost / opt;
}

OnlineRun RunOnline(Instance& instance, std::span<const Event> events,
                    double epsilon, const RunOptions& options) {
  for (const Event& e : events) {
    if (e.kind != EventKind::kArrive) {
      throw Error("the online algorithm does not support departures");
    }
  }
  OnlineRun run;
  run.ledger.metadata.algorithm = "online";
  run.ledger.metadata.epsilon = epsilon;
  OnlineAlgorithm alg(instance, epsilon);
  for (size_t k = 0; k < events.size(); ++k) {
    StepRecord rec = alg.Arrive(events[k]);
    const bool verify =
        options.verify_every > 0 && options.oracle &&
        (rec.t % options.verify_every == 0 || k + 1 == events.size());
    if (verify) {
      rec.opt = options.oracle(instance, alg.arrived());
      rec.ratio = CompetitiveRatio(rec.grand_total, *rec.opt);
    }
    run.ledger.records.push_back(std::move(rec));
  }
  run.solution = alg.solution();
  run.recourse = alg.recourse();
  run.initial_opens = alg.initial_opens();
  run.stages = alg.stage();
  run.deltas = alg.deltas();
  return run;
}

}  // namespace dynfl
