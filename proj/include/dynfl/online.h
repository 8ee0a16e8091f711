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

#ifndef DYNFL_ONLINE_H_
#define DYNFL_ONLINE_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "dynfl/event_stream.h"
#include "dynfl/instance.h"
#include "dynfl/ledger.h"
#include "dynfl/local_search.h"
#include "dynfl/solution.h"

namespace dynfl {

// Optimal cost for the given clients; supplied by the harness.
using OptOracle =
    std::function<double(const Instance&, std::span<const ClientIndex>)>;

struct InitialConnection {
  // Cost increase caused by the arrival.
  double delta = 0.0;
  FacilityId facility = kNoFacility;
  bool opened = false;
};

// Connects a newly arrived client: opens the closed facility minimizing
// f_i + d(i, j) if that is strictly cheaper than d(j, S), otherwise connects
// to the nearest open facility. With S empty the open branch is forced.
InitialConnection InitialConnect(const Instance& instance, Solution& solution,
                                 ClientIndex j);

// eps' used for a target ratio of alpha_FL + epsilon.
inline double OnlineEpsPrime(double epsilon) { return epsilon / 6.0; }

// eps' * cost / (alpha_FL * |C|); zero with no active client.
double EfficiencyThreshold(double eps_prime, double cost, int num_clients);

// C, S and sigma as they were when a stage started.
struct StageSnapshot {
  std::vector<ClientIndex> clients;
  std::vector<FacilityId> open;
  std::vector<FacilityId> assignment;
};

struct OnlineStep {
  ClientIndex client = 0;
  double delta = 0.0;
  // Threshold used by the last operation search of the step.
  double phi = 0.0;
  bool opened = false;
  ConvergeResult converge;
  double cost_after = 0.0;
  bool stage_ended = false;
};

// One stage: every arrival is connected with InitialConnect and followed by
// local search with the live threshold; the stage ends once the cost exceeds
// init / eps'.
class OnlineStage {
 public:
  OnlineStage(const Instance& instance, Solution& solution, double eps_prime);

  // j must already be registered in the instance and not be active.
  OnlineStep Arrive(ClientIndex j);

  bool ended() const { return ended_; }
  double init() const { return init_; }
  int time() const { return time_; }
  const StageSnapshot& snapshot() const { return snapshot_; }

 private:
  const Instance* instance_;
  Solution* solution_;
  double eps_prime_;
  double init_;
  StageSnapshot snapshot_;
  int time_ = 0;
  bool ended_ = false;
};

struct StageResult {
  std::vector<OnlineStep> steps;
  bool ended = false;
  // Number of events consumed from the input span.
  size_t consumed = 0;
};

// Runs a single stage over the arrivals in `events` (registering each one in
// the instance) until it ends or the events run out.
StageResult RunStage(Instance& instance, std::span<const Event> events,
                     Solution& solution, double eps_prime);

// The staged online algorithm with freezing. Each stage-start snapshot is
// frozen when its stage ends: one copy of every facility of S at that moment
// is charged permanently and the stage-start clients keep their connection.
class OnlineAlgorithm {
 public:
  OnlineAlgorithm(Instance& instance, double epsilon);

  // Registers and processes one arrival. Throws Error on a departure.
  StepRecord Arrive(const Event& event);

  const Solution& solution() const { return solution_; }
  std::span<const ClientIndex> arrived() const { return arrived_; }
  double eps_prime() const { return eps_prime_; }
  // Threshold for the current state.
  double phi() const;
  int stage() const { return stage_index_; }
  const Recourse& recourse() const { return recourse_; }
  std::int64_t initial_opens() const { return initial_opens_; }
  const std::vector<double>& deltas() const { return deltas_; }

 private:
  void FreezeSnapshot(const StageSnapshot& snapshot);

  Instance* instance_;
  double eps_prime_;
  Solution solution_;
  std::unique_ptr<OnlineStage> stage_;
  int stage_index_ = 1;
  std::vector<ClientIndex> arrived_;
  Recourse recourse_;
  std::int64_t initial_opens_ = 0;
  std::vector<double> deltas_;
  std::int64_t t_ = 0;
};

struct RunOptions {
  // Run the oracle every k steps (and on the last step); 0 disables it.
  int verify_every = 0;
  OptOracle oracle;
};

struct OnlineRun {
  RunLedger ledger;
  Solution solution;
  Recourse recourse;
  std::int64_t initial_opens = 0;
  int stages = 0;
  std::vector<double> deltas;
};

// Throws Error if the stream contains a departure.
OnlineRun RunOnline(Instance& instance, std::span<const Event> events,
                    double epsilon, const RunOptions& options = {});

// grand_total / opt, with 0/0 read as 1.
double CompetitiveRatio(double cost, double opt);

}  // namespace dynfl

#endif  // DYNFL_ONLINE_H_
