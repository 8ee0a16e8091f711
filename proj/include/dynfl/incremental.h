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

#ifndef DYNFL_INCREMENTAL_H_
#define DYNFL_INCREMENTAL_H_

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "dynfl/event_stream.h"
#include "dynfl/instance.h"
#include "dynfl/ledger.h"
#include "dynfl/online.h"
#include "dynfl/randomized_search.h"
#include "dynfl/solution.h"

namespace dynfl {

inline constexpr double kDefaultIterationMultiplier = 3.0;

// ceil(multiplier * (|F| / eps') * ln(max(gamma, 2))).
std::int64_t IterationBudget(int num_facilities, double eps_prime,
                             double gamma,
                             double multiplier = kDefaultIterationMultiplier);

// Inclusive range of the threshold exponents q tried on an arrival:
// [ceil(log2(last / |F|)), ceil(log2(last / eps'))]. Requires last > 0.
std::pair<int, int> ThresholdRange(double last, int num_facilities,
                                   double eps_prime);

struct IncrementalOptions {
  double epsilon = 0.3;
  // Defaults to n^3 in RunIncremental.
  std::optional<double> gamma;
  double iteration_multiplier = kDefaultIterationMultiplier;
  std::uint64_t seed = 1;
};

struct IncrementalStep {
  ClientIndex client = 0;
  // Cost increase caused by connecting the client.
  double delta = 0.0;
  // min_i (f_i + d(i, j)).
  double cheapest_service = 0.0;
  // Watermark at the beginning of the step.
  double last_before = 0.0;
  int threshold_opens = 0;
  bool iterated = false;
  bool stage_ended = false;
};

struct StageStats {
  int stage = 0;
  int steps = 0;
  std::int64_t fl_iterate_calls = 0;
  // Sum over the stage of delta_t / last_t; infinite once last_t is zero.
  double delta_over_last = 0.0;
};

// Recorded right before every search call triggered by an arrival.
struct IterateCall {
  std::int64_t t = 0;
  double cost_before = 0.0;
};

// Staged incremental algorithm driven by randomized local search. Stage-start
// states are frozen exactly as in the online algorithm.
class IncrementalAlgorithm {
 public:
  IncrementalAlgorithm(Instance& instance, double epsilon, double gamma,
                       std::uint64_t seed,
                       double iteration_multiplier =
                           kDefaultIterationMultiplier);

  // Registers and processes one arrival. Throws Error on a departure.
  StepRecord Arrive(const Event& event);
  IncrementalStep last_step() const { return last_step_; }

  const SearchState& state() const { return state_; }
  // Holds only the frozen archive.
  const Solution& archive() const { return archive_; }
  CostReport Cost() const;

  double eps_prime() const { return eps_prime_; }
  double gamma() const { return gamma_; }
  std::int64_t iteration_budget() const { return budget_; }
  double last() const { return last_; }
  double init() const { return init_; }
  int stage() const { return static_cast<int>(stages_.size()); }
  std::int64_t fl_iterate_calls() const { return fl_calls_; }
  std::int64_t sampled_iterations() const { return sampled_; }
  std::span<const ClientIndex> arrived() const { return arrived_; }
  const std::vector<StageStats>& stages() const { return stages_; }
  const std::vector<IterateCall>& iterate_calls() const { return calls_; }

 private:
  void StartStage();
  void EndStage();
  void Iterate();

  Instance* instance_;
  double eps_prime_;
  double gamma_;
  std::int64_t budget_;
  Rng rng_;
  SearchState state_;
  Solution archive_;
  StageSnapshot snapshot_;
  double init_ = 0.0;
  double last_ = 0.0;
  std::int64_t fl_calls_ = 0;
  std::int64_t sampled_ = 0;
  std::int64_t t_ = 0;
  std::vector<ClientIndex> arrived_;
  std::vector<StageStats> stages_;
  std::vector<IterateCall> calls_;
  IncrementalStep last_step_;
};

struct IncrementalRun {
  RunLedger ledger;
  std::vector<IncrementalStep> steps;
  std::vector<StageStats> stages;
  std::vector<IterateCall> iterate_calls;
  std::int64_t fl_iterate_calls = 0;
  std::int64_t iteration_budget = 0;
  double eps_prime = 0.0;
  double gamma = 0.0;
};

// Throws Error if the stream contains a departure.
IncrementalRun RunIncremental(Instance& instance, std::span<const Event> events,
                              const IncrementalOptions& options,
                              const RunOptions& run_options = {});

}  // namespace dynfl

#endif  // DYNFL_INCREMENTAL_H_
