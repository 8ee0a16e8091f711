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

#include "dynfl/bench.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <iomanip>
#include <istream>
#include <ostream>
#include <thread>

#include "dynfl/event_stream.h"
#include "dynfl/frt.h"
#include "dynfl/hst.h"
#include "dynfl/hst_dynamic.h"
#include "dynfl/incremental.h"
#include "dynfl/online.h"
#include "dynfl/oracle.h"
#include "dynfl/randomized_search.h"
#include "json.hpp"

namespace dynfl {

namespace {

using nlohmann::json;

void Summarize(const RunLedger& ledger, BenchRow& row) {
  row.events = static_cast<std::int64_t>(ledger.records.size());
  if (ledger.records.empty()) return;
  double wall = 0.0;
  for (const StepRecord& r : ledger.records) {
    wall += r.wall_us;
    if (r.ratio) row.max_ratio = std::max(row.max_ratio.value_or(0.0), *r.ratio);
  }
  const StepRecord& last = ledger.records.back();
  row.final_cost = last.grand_total;
  row.client_recourse = last.client_recourse_cum;
  row.recourse_per_event =
      static_cast<double>(row.client_recourse) / static_cast<double>(row.events);
  row.mean_us_per_event = wall / static_cast<double>(row.events);
  row.fl_iterate_calls = last.fl_iterate_calls;
}

}  // namespace

BenchConfig ParseBenchConfig(std::istream& in) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(std::string("bench config: ") + e.what());
  }
  BenchConfig config;
  config.out_dir = doc.value("out_dir", "");
  config.threads = doc.value("threads", 0);
  if (!doc.contains("runs")) return config;
  if (!doc["runs"].is_array()) throw Error("bench config: 'runs' must be a list");
  for (const auto& run : doc["runs"]) {
    BenchCell base;
    base.algorithm = run.value("algorithm", "");
    base.input = run.value("input", "");
    base.tree = run.value("tree", "");
    base.epsilon = run.value("epsilon", 0.3);
    base.verify_every = run.value("verify_every", 10);
    if (run.contains("gamma")) base.gamma = run["gamma"].get<double>();
    if (base.algorithm.empty() || base.input.empty()) {
      throw Error("bench config: every run needs an algorithm and an input");
    }
    std::vector<std::uint64_t> seeds{1};
    if (run.contains("seeds")) {
      seeds = run["seeds"].get<std::vector<std::uint64_t>>();
    }
    for (std::uint64_t s : seeds) {
      BenchCell cell = base;
      cell.seed = s;
      config.cells.push_back(std::move(cell));
    }
  }
  return config;
}

BenchRow RunBenchCell(const BenchCell& cell, const std::string& out_dir) {
  BenchRow row;
  row.cell = cell;
  try {
    LoadedInput input = LoadInputFile(cell.input);
    RunOptions options;
    if (cell.verify_every > 0 &&
        input.instance.num_facilities() <= kMaxOracleFacilities) {
      options.verify_every = cell.verify_every;
      options.oracle = OracleCost;
    }
    RunLedger ledger;
    if (cell.algorithm == "online") {
      ledger = RunOnline(input.instance, input.events, cell.epsilon, options)
                   .ledger;
    } else if (cell.algorithm == "incremental") {
      IncrementalOptions inc;
      inc.epsilon = cell.epsilon;
      inc.gamma = cell.gamma;
      inc.seed = cell.seed;
      ledger = RunIncremental(input.instance, input.events, inc, options).ledger;
    } else if (cell.algorithm == "hst") {
      if (cell.tree.empty()) throw Error("hst runs need a tree file");
      const Hst tree = LoadHstFile(cell.tree);
      ledger = RunHst(tree, input.events).ledger;
    } else if (cell.algorithm == "general") {
      ledger = RunFullyDynamicGeneral(input.instance, input.events, cell.seed)
                   .ledger;
    } else {
      throw Error("unknown algorithm '" + cell.algorithm + "'");
    }
    ledger.metadata.input = cell.input;
    ledger.metadata.seed = cell.seed;
    Summarize(ledger, row);
    if (!out_dir.empty()) {
      std::filesystem::create_directories(out_dir);
      const std::string stem = std::filesystem::path(cell.input).stem().string();
      row.ledger_path = (std::filesystem::path(out_dir) /
                         (cell.algorithm + "_" + stem + "_s" +
                          std::to_string(cell.seed) + ".jsonl"))
                            .string();
      WriteLedgerFile(row.ledger_path, ledger);
    }
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  return row;
}

std::vector<BenchRow> RunBench(const BenchConfig& config) {
  std::vector<BenchRow> rows(config.cells.size());
  if (rows.empty()) return rows;
  int threads = config.threads > 0
                    ? config.threads
                    : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::clamp(threads, 1, static_cast<int>(rows.size()));
  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (size_t k = next++; k < rows.size(); k = next++) {
        rows[k] = RunBenchCell(config.cells[k], config.out_dir);
      }
    });
  }
  for (auto& t : pool) t.join();
  return rows;
}

void WriteBenchTable(std::ostream& out, std::span<const BenchRow> rows) {
  out << std::left << std::setw(12) << "algorithm" << std::setw(28) << "input"
      << std::right << std::setw(6) << "seed" << std::setw(8) << "events"
      << std::setw(14) << "cost" << std::setw(10) << "max_ratio"
      << std::setw(12) << "recourse/ev" << std::setw(12) << "us/event"
      << '\n';
  for (const BenchRow& r : rows) {
    out << std::left << std::setw(12) << r.cell.algorithm << std::setw(28)
        << std::filesystem::path(r.cell.input).filename().string()
        << std::right << std::setw(6) << r.cell.seed;
    if (!r.error.empty()) {
      out << "  error: " << r.error << '\n';
      continue;
    }
    out << std::setw(8) << r.events << std::setw(14) << std::fixed
        << std::setprecision(2) << r.final_cost << std::setw(10);
    if (r.max_ratio) {
      out << std::setprecision(4) << *r.max_ratio;
    } else {
      out << "-";
    }
    out << std::setw(12) << std::setprecision(3) << r.recourse_per_event
        << std::setw(12) << std::setprecision(1) << r.mean_us_per_event << '\n';
    out.unsetf(std::ios::fixed);
  }
}

void WriteBenchJson(std::ostream& out, std::span<const BenchRow> rows) {
  json doc = json::array();
  for (const BenchRow& r : rows) {
    json j{{"algorithm", r.cell.algorithm},
           {"input", r.cell.input},
           {"seed", r.cell.seed},
           {"events", r.events},
           {"final_cost", r.final_cost},
           {"client_recourse", r.client_recourse},
           {"recourse_per_event", r.recourse_per_event},
           {"mean_us_per_event", r.mean_us_per_event}};
    if (r.max_ratio) j["max_ratio"] = *r.max_ratio;
    if (r.fl_iterate_calls) j["fl_iterate_calls"] = *r.fl_iterate_calls;
    if (!r.ledger_path.empty()) j["ledger"] = r.ledger_path;
    if (!r.error.empty()) j["error"] = r.error;
    doc.push_back(std::move(j));
  }
  out << doc.dump(2) << '\n';
}

std::vector<ScalingPoint> MeasureIterateScaling(
    const Instance& instance, std::span<const std::int64_t> budgets,
    std::uint64_t seed, int repeats) {
  if (instance.num_clients() == 0) throw Error("scaling needs clients");
  FacilityId start = 0;
  double start_cost = 0.0;
  for (FacilityId i = 0; i < instance.num_facilities(); ++i) {
    double c = instance.opening_cost(i);
    for (ClientIndex j = 0; j < instance.num_clients(); ++j) {
      c += static_cast<double>(instance.distance(j, i));
    }
    if (i == 0 || c < start_cost) {
      start = i;
      start_cost = c;
    }
  }
  std::vector<ClientIndex> clients(instance.num_clients());
  for (ClientIndex j = 0; j < instance.num_clients(); ++j) clients[j] = j;
  const FacilityId open[] = {start};
  std::vector<ScalingPoint> out;
  for (std::int64_t m : budgets) {
    std::vector<double> times;
    for (int r = 0; r < std::max(repeats, 1); ++r) {
      SearchState state(instance);
      state.Reset(open, clients);
      Rng rng(seed);
      const auto t0 = std::chrono::steady_clock::now();
      state.FlIterate(m, rng);
      times.push_back(std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - t0)
                          .count());
    }
    std::sort(times.begin(), times.end());
    out.push_back({m, times[times.size() / 2]});
  }
  return out;
}

}  // namespace dynfl
