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

#include "dynfl/incremental.h"

#include <chrono>
#include <cmath>
#include <limits>

namespace dynfl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

std::int64_t IterationBudget(int num_facilities, double eps_prime,
                             double gamma, double multiplier) {
  if (!(eps_prime > 0.0)) throw Error("eps' must be positive");
  const double m = multiplier * (num_facilities / eps_prime) *
                   std::log(std::max(gamma, 2.0));
  return static_cast<std::int64_t>(std::ceil(m));
}

std::pair<int, int> ThresholdRange(double last, int num_facilities,
                                   double eps_prime) {
  if (!(last > 0.0)) throw Error("threshold range needs a positive watermark");
  return {static_cast<int>(std::ceil(std::log2(last / num_facilities))),
          static_cast<int>(std::ceil(std::log2(last / eps_prime)))};
}

IncrementalAlgorithm::IncrementalAlgorithm(Instance& instance, double epsilon,
                                           double gamma, std::uint64_t seed,
                                           double iteration_multiplier)
    : instance_(&instance),
      eps_prime_(OnlineEpsPrime(epsilon)),
      gamma_(gamma),
      budget_(0),
      rng_(seed),
      state_(instance),
      archive_(instance.num_facilities()) {
  if (!(epsilon > 0.0)) throw Error("epsilon must be positive");
  if (!(gamma >= 2.0)) throw Error("gamma must be at least 2");
  if (instance.num_facilities() == 0) throw Error("instance has no facility");
  budget_ = IterationBudget(instance.num_facilities(), eps_prime_, gamma,
                            iteration_multiplier);
  StartStage();
}

CostReport IncrementalAlgorithm::Cost() const {
  CostReport r;
  r.facility_cost = state_.facility_cost();
  r.connection_cost = state_.connection_cost();
  r.total = state_.cost();
  r.scaled = state_.scaled_cost();
  r.frozen_cost = archive_.frozen_facility_cost() +
                  static_cast<double>(archive_.frozen_connection_cost());
  r.grand_total = r.total + r.frozen_cost;
  std::vector<char> paid(instance_->num_facilities(), 0);
  double facilities = r.facility_cost;
  for (FacilityId i = 0; i < instance_->num_facilities(); ++i) {
    paid[i] = state_.is_open(i);
  }
  for (FacilityId i : archive_.frozen_facilities()) {
    if (!paid[i]) {
      paid[i] = 1;
      facilities += instance_->opening_cost(i);
    }
  }
  r.physical_total = facilities + static_cast<double>(r.connection_cost) +
                     static_cast<double>(archive_.frozen_connection_cost());
  return r;
}

void IncrementalAlgorithm::Iterate() {
  const SearchState::IterateResult res = state_.FlIterate(budget_, rng_);
  ++fl_calls_;
  ++stages_.back().fl_iterate_calls;
  sampled_ += res.iterations;
}

void IncrementalAlgorithm::StartStage() {
  StageStats stats;
  stats.stage = static_cast<int>(stages_.size()) + 1;
  stages_.push_back(stats);
  const auto clients = state_.clients();
  snapshot_.clients.assign(clients.begin(), clients.end());
  snapshot_.open = state_.OpenFacilities();
  snapshot_.assignment.clear();
  for (ClientIndex j : clients) {
    snapshot_.assignment.push_back(state_.assignment(j));
  }
  Iterate();
  init_ = state_.cost();
  last_ = init_;
}

void IncrementalAlgorithm::EndStage() {
  const int stage = static_cast<int>(stages_.size());
  for (FacilityId i : snapshot_.open) {
    archive_.FreezeFacilityCopy(i, instance_->opening_cost(i));
  }
  for (size_t k = 0; k < snapshot_.clients.size(); ++k) {
    const ClientIndex j = snapshot_.clients[k];
    const FacilityId i = snapshot_.assignment[k];
    archive_.FreezeClient(j, i, instance_->distance(j, i), stage);
    state_.RemoveClient(j);
  }
  StartStage();
}

StepRecord IncrementalAlgorithm::Arrive(const Event& event) {
  if (event.kind != EventKind::kArrive) {
    throw Error("the incremental algorithm does not support departures");
  }
  const auto start = std::chrono::steady_clock::now();
  const ClientIndex j = RegisterArrival(*instance_, event);
  arrived_.push_back(j);
  ++t_;
  const Instance& inst = *instance_;
  const int nf = inst.num_facilities();

  IncrementalStep step;
  step.client = j;
  step.last_before = last_;
  step.cheapest_service = kInf;
  for (FacilityId i = 0; i < nf; ++i) {
    step.cheapest_service =
        std::min(step.cheapest_service,
                 inst.opening_cost(i) + static_cast<double>(inst.distance(j, i)));
  }

  if (last_ > 0.0) {
    const auto [q_lo, q_hi] = ThresholdRange(last_, nf, eps_prime_);
    for (int q = q_lo; q <= q_hi; ++q) {
      const double cap = std::ldexp(1.0, q);
      FacilityId best = kNoFacility;
      for (FacilityId i = 0; i < nf; ++i) {
        if (state_.is_open(i) || inst.opening_cost(i) > cap) continue;
        if (best == kNoFacility || inst.distance(j, i) < inst.distance(j, best)) {
          best = i;
        }
      }
      if (best != kNoFacility && state_.TryOpen(best, 1.0)) {
        ++step.threshold_opens;
      }
    }
  }

  const double before = state_.cost();
  FacilityId cheapest = kNoFacility;
  double cheapest_cost = kInf;
  for (FacilityId i = 0; i < nf; ++i) {
    if (state_.is_open(i)) continue;
    const double c =
        inst.opening_cost(i) + static_cast<double>(inst.distance(j, i));
    if (c < cheapest_cost) {
      cheapest_cost = c;
      cheapest = i;
    }
  }
  if (state_.num_open() == 0) {
    state_.Open(cheapest);
    state_.AddClient(j);
  } else {
    state_.AddClient(j);
    if (cheapest != kNoFacility) state_.TryOpen(cheapest, 1.0);
  }
  step.delta = state_.cost() - before;

  StageStats& stats = stages_.back();
  ++stats.steps;
  stats.delta_over_last +=
      last_ > 0.0 ? step.delta / last_ : (step.delta > 0.0 ? kInf : 0.0);

  if (state_.cost() > (1.0 + eps_prime_) * last_ + kCostTolerance) {
    step.iterated = true;
    calls_.push_back({t_, state_.cost()});
    Iterate();
    if (state_.cost() > last_) last_ = state_.cost();
    if (last_ > init_ / eps_prime_) step.stage_ended = true;
  }

  StepRecord rec;
  rec.t = t_;
  rec.event = "arrive";
  rec.stage = stage();
  if (step.stage_ended) EndStage();
  const CostReport cost = Cost();
  rec.cost = cost.total;
  rec.frozen_cost = cost.frozen_cost;
  rec.grand_total = cost.grand_total;
  rec.delta_t = step.delta;
  rec.last = last_;
  rec.fl_iterate_calls = fl_calls_;
  rec.sampled_iterations = sampled_;
  rec.wall_us = std::chrono::duration<double, std::micro>(
                    std::chrono::steady_clock::now() - start)
                    .count();
  last_step_ = step;
  return rec;
}

IncrementalRun RunIncremental(Instance& instance, std::span<const Event> events,
                              const IncrementalOptions& options,
                              const RunOptions& run_options) {
  int arrivals = 0;
  for (const Event& e : events) {
    if (e.kind != EventKind::kArrive) {
      throw Error("the incremental algorithm does not support departures");
    }
    ++arrivals;
  }
  double gamma = 0.0;
  if (options.gamma) {
    gamma = *options.gamma;
  } else {
    const double n = instance.num_facilities() + arrivals;
    gamma = std::max(2.0, n * n * n);
  }
  IncrementalRun run;
  run.ledger.metadata.algorithm = "incremental";
  run.ledger.metadata.epsilon = options.epsilon;
  run.ledger.metadata.gamma = gamma;
  run.ledger.metadata.seed = options.seed;
  IncrementalAlgorithm alg(instance, options.epsilon, gamma, options.seed,
                           options.iteration_multiplier);
  for (size_t k = 0; k < events.size(); ++k) {
    StepRecord rec = alg.Arrive(events[k]);
    const bool verify =
        run_options.verify_every > 0 && run_options.oracle &&
        (rec.t % run_options.verify_every == 0 || k + 1 == events.size());
    if (verify) {
      rec.opt = run_options.oracle(instance, alg.arrived());
      rec.ratio = CompetitiveRatio(rec.grand_total, *rec.opt);
    }
    run.steps.push_back(alg.last_step());
    run.ledger.records.push_back(std::move(rec));
  }
  run.stages = alg.stages();
  run.iterate_calls = alg.iterate_calls();
  run.fl_iterate_calls = alg.fl_iterate_calls();
  run.iteration_budget = alg.iteration_budget();
  run.eps_prime = alg.eps_prime();
  run.gamma = gamma;
  return run;
}

}  // namespace dynfl
