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

#ifndef DYNFL_BENCH_H_
#define DYNFL_BENCH_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dynfl/instance.h"
#include "dynfl/ledger.h"

namespace dynfl {

// One (algorithm, input, seed) run. Algorithms: online, incremental, hst
// (needs `tree`) and general.
struct BenchCell {
  std::string algorithm;
  std::string input;
  std::string tree;
  std::uint64_t seed = 1;
  double epsilon = 0.3;
  std::optional<double> gamma;
  int verify_every = 10;
};

struct BenchConfig {
  std::vector<BenchCell> cells;
  // Ledgers are written here when set.
  std::string out_dir;
  // Worker threads; 0 picks the hardware concurrency.
  int threads = 0;
};

// {"out_dir": DIR, "threads": N, "runs": [{"algorithm": A, "input": FILE,
//   "tree": FILE, "seeds": [S, ...], "epsilon": E, "gamma": G,
//   "verify_every": K}, ...]}
// Each run expands into one cell per seed.
BenchConfig ParseBenchConfig(std::istream& in);

struct BenchRow {
  BenchCell cell;
  std::int64_t events = 0;
  double final_cost = 0.0;
  std::optional<double> max_ratio;
  std::int64_t client_recourse = 0;
  double recourse_per_event = 0.0;
  double mean_us_per_event = 0.0;
  std::optional<std::int64_t> fl_iterate_calls;
  std::string ledger_path;
  // Set when the run threw.
  std::string error;
};

BenchRow RunBenchCell(const BenchCell& cell, const std::string& out_dir = "");

// Cells run concurrently; rows come back in cell order.
std::vector<BenchRow> RunBench(const BenchConfig& config);

void WriteBenchTable(std::ostream& out, std::span<const BenchRow> rows);
void WriteBenchJson(std::ostream& out, std::span<const BenchRow> rows);

struct ScalingPoint {
  std::int64_t iterations = 0;
  // Median wall time over the repeats.
  double seconds = 0.0;
};

// Times randomized local search with each iteration budget, always starting
// from the same solution: every client registered in `instance` connected to
// the single facility minimizing total cost.
std::vector<ScalingPoint> MeasureIterateScaling(
    const Instance& instance, std::span<const std::int64_t> budgets,
    std::uint64_t seed, int repeats = 3);

}  // namespace dynfl

#endif  // DYNFL_BENCH_H_
