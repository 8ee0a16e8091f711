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

// Command-line front end: instance generation, exact optima, the three
// dynamic algorithms, tree sampling and benchmarks.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "CLI11.hpp"
#include "dynfl/bench.h"
#include "dynfl/event_stream.h"
#include "dynfl/frt.h"
#include "dynfl/generators.h"
#include "dynfl/hst.h"
#include "dynfl/hst_dynamic.h"
#include "dynfl/incremental.h"
#include "dynfl/ledger.h"
#include "dynfl/online.h"
#include "dynfl/oracle.h"
#include "json.hpp"

namespace {

using nlohmann::json;

struct Globals {
  std::uint64_t seed = 1;
  std::string report;
  int verify_every = 10;
  bool quiet = false;
  bool check = false;
};

// Collects violated checks; in --check mode any entry fails the run.
class Checker {
 public:
  void Expect(bool ok, const std::string& what) {
    if (!ok) failures_.push_back(what);
  }
  const std::vector<std::string>& failures() const { return failures_; }

 private:
  std::vector<std::string> failures_;
};

int Finish(const Globals& g, const json& summary, const Checker& checker) {
  json out = summary;
  out["violations"] = checker.failures().size();
  if (!g.quiet) std::cout << out.dump() << '\n';
  for (const auto& f : checker.failures()) std::cerr << "violation: " << f << '\n';
  return g.check && !checker.failures().empty() ? 1 : 0;
}

void MaybeReport(const Globals& g, const dynfl::RunLedger& ledger) {
  if (!g.report.empty()) dynfl::WriteLedgerFile(g.report, ledger);
}

std::vector<dynfl::ClientIndex> LiveClients(const dynfl::LoadedInput& input,
                                            dynfl::Instance& instance) {
  std::unordered_map<std::string, dynfl::ClientIndex> live;
  for (const auto& e : input.events) {
    if (e.kind == dynfl::EventKind::kArrive) {
      live[e.client] = dynfl::RegisterArrival(instance, e);
    } else {
      live.erase(e.client);
    }
  }
  std::vector<dynfl::ClientIndex> out;
  for (const auto& [name, j] : live) out.push_back(j);
  std::sort(out.begin(), out.end());
  return out;
}

struct GenArgs {
  std::string kind = "random-metric";
  std::string out;
  std::string tree_out;
  std::vector<dynfl::Distance> positions;
  std::vector<double> costs;
  std::vector<dynfl::Distance> arrival_positions;
  dynfl::RandomMetricParams metric;
  dynfl::HstParams tree;
};

int RunGen(const Globals& g, const GenArgs& a) {
  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!a.out.empty()) {
    file.open(a.out);
    if (!file) throw dynfl::Error("cannot write " + a.out);
    out = &file;
  }
  if (a.kind == "line") {
    const auto gen = dynfl::GenerateLine(a.positions, a.costs,
                                         a.arrival_positions);
    dynfl::WriteInput(*out, gen.instance, gen.events);
  } else if (a.kind == "random-metric") {
    const auto gen = dynfl::GenerateRandomMetric(a.metric, g.seed);
    dynfl::WriteInput(*out, gen.instance, gen.events);
  } else if (a.kind == "hst") {
    const auto gen = dynfl::GenerateHst(a.tree, g.seed);
    dynfl::WriteInput(*out, gen.instance, gen.events);
    if (!a.tree_out.empty()) {
      std::ofstream tree(a.tree_out);
      if (!tree) throw dynfl::Error("cannot write " + a.tree_out);
      dynfl::WriteHst(tree, gen.tree);
    }
  } else {
    throw dynfl::Error("unknown kind '" + a.kind + "'");
  }
  return 0;
}

int RunOracle(const Globals& g, const std::string& path) {
  dynfl::LoadedInput input = dynfl::LoadInputFile(path);
  dynfl::Instance instance = input.instance;
  const auto clients = LiveClients(input, instance);
  const auto r = dynfl::BruteForceOpt(instance, clients);
  json summary{{"command", "oracle"},
               {"cost", r.cost},
               {"open", r.open},
               {"clients", clients.size()},
               {"method", r.method}};
  return Finish(g, summary, Checker());
}

int RunOnlineCommand(const Globals& g, const std::string& path, double eps) {
  dynfl::LoadedInput input = dynfl::LoadInputFile(path);
  dynfl::RunOptions options;
  const bool can_verify =
      input.instance.num_facilities() <= dynfl::kMaxOracleFacilities;
  if (g.verify_every > 0 && can_verify) {
    options.verify_every = g.verify_every;
    options.oracle = dynfl::OracleCost;
  }
  dynfl::OnlineRun run =
      dynfl::RunOnline(input.instance, input.events, eps, options);
  run.ledger.metadata.input = path;
  MaybeReport(g, run.ledger);

  Checker checker;
  double max_ratio = 0.0;
  for (const auto& r : run.ledger.records) {
    if (!r.ratio) continue;
    max_ratio = std::max(max_ratio, *r.ratio);
    checker.Expect(*r.ratio <= dynfl::kAlphaFL + eps + 1e-9,
                   "t=" + std::to_string(r.t) + " ratio " +
                       std::to_string(*r.ratio));
  }
  checker.Expect(run.recourse.facility - run.recourse.idle_facility <=
                     2 * run.recourse.client,
                 "facility recourse exceeds its client-move bound");
  json summary{{"command", "run-online"},
               {"steps", run.ledger.records.size()},
               {"stages", run.stages},
               {"client_recourse", run.recourse.client},
               {"facility_recourse", run.recourse.facility},
               {"initial_opens", run.initial_opens}};
  if (!run.ledger.records.empty()) {
    summary["grand_total"] = run.ledger.records.back().grand_total;
  }
  if (options.verify_every > 0) summary["max_ratio"] = max_ratio;
  return Finish(g, summary, checker);
}

int RunIncrementalCommand(const Globals& g, const std::string& path, double eps,
                          std::optional<double> gamma, double multiplier) {
  dynfl::LoadedInput input = dynfl::LoadInputFile(path);
  dynfl::RunOptions options;
  if (g.verify_every > 0 &&
      input.instance.num_facilities() <= dynfl::kMaxOracleFacilities) {
    options.verify_every = g.verify_every;
    options.oracle = dynfl::OracleCost;
  }
  dynfl::IncrementalOptions inc;
  inc.epsilon = eps;
  inc.gamma = gamma;
  inc.seed = g.seed;
  inc.iteration_multiplier = multiplier;
  dynfl::IncrementalRun run =
      dynfl::RunIncremental(input.instance, input.events, inc, options);
  run.ledger.metadata.input = path;
  MaybeReport(g, run.ledger);

  Checker checker;
  const double e = run.eps_prime;
  const double bound = (1.0 + e) * (dynfl::kAlphaFL + e);
  double max_ratio = 0.0;
  for (size_t k = 0; k < run.steps.size(); ++k) {
    const auto& s = run.steps[k];
    const auto& r = run.ledger.records[k];
    const std::string at = "t=" + std::to_string(r.t);
    checker.Expect(s.delta <= s.cheapest_service + 1e-9,
                   at + " arrival cost exceeds the cheapest service");
    checker.Expect(r.cost <= (1.0 + e) * *r.last + 1e-9,
                   at + " cost above the watermark");
    if (r.ratio) {
      max_ratio = std::max(max_ratio, *r.ratio);
      checker.Expect(*r.ratio <= bound + 1e-9,
                     at + " ratio " + std::to_string(*r.ratio));
    }
  }
  for (const auto& st : run.stages) {
    checker.Expect(st.fl_iterate_calls <= 1.0 + st.delta_over_last / e + 1e-9,
                   "stage " + std::to_string(st.stage) +
                       " exceeds its search-call bound");
  }
  json summary{{"command", "run-incremental"},
               {"steps", run.ledger.records.size()},
               {"stages", run.stages.size()},
               {"fl_iterate_calls", run.fl_iterate_calls},
               {"iteration_budget", run.iteration_budget},
               {"gamma", run.gamma}};
  if (!run.ledger.records.empty()) {
    summary["grand_total"] = run.ledger.records.back().grand_total;
  }
  if (options.verify_every > 0) summary["max_ratio"] = max_ratio;
  return Finish(g, summary, checker);
}

int RunHstCommand(const Globals& g, const std::string& tree_path,
                  const std::string& path) {
  const dynfl::Hst tree = dynfl::LoadHstFile(tree_path);
  dynfl::LoadedInput input = dynfl::LoadInputFile(path);
  if (input.instance.num_facilities() != tree.num_facilities()) {
    throw dynfl::Error("tree and input disagree on the number of facilities");
  }
  for (dynfl::FacilityId i = 0; i < tree.num_facilities(); ++i) {
    if (std::abs(tree.facility_cost(i) - input.instance.opening_cost(i)) >
        1e-9) {
      throw dynfl::Error("tree and input disagree on the cost of facility " +
                         std::to_string(i));
    }
  }
  dynfl::HstRunOptions options;
  options.verify_every = g.verify_every;
  dynfl::HstRun run = dynfl::RunHst(tree, input.events, options);
  run.ledger.metadata.input = path;
  MaybeReport(g, run.ledger);
  Checker checker;
  for (const auto& v : run.violations) checker.Expect(false, v);
  const double log_d = std::log2(std::max<double>(tree.diameter(), 2.0));
  json summary{{"command", "run-hst"},
               {"events", run.events},
               {"reconnections", run.reconnections},
               {"reconnections_per_event",
                run.events ? static_cast<double>(run.reconnections) /
                                 static_cast<double>(run.events)
                           : 0.0},
               {"log2_diameter", log_d}};
  if (!run.ledger.records.empty()) {
    const auto& last = run.ledger.records.back();
    summary["cost"] = last.cost;
    summary["lb_certificate"] = *last.lb_certificate;
  }
  return Finish(g, summary, checker);
}

int RunEmbed(const Globals& g, const std::string& path, int samples,
             const std::string& emit_tree, bool stats) {
  const dynfl::LoadedInput input = dynfl::LoadInputFile(path);
  std::vector<dynfl::EmbeddingSample> drawn;
  for (int k = 0; k < samples; ++k) {
    drawn.push_back(dynfl::SampleHst(input.instance, g.seed + k, true));
  }
  if (!emit_tree.empty() && !drawn.empty()) {
    std::ofstream out(emit_tree);
    if (!out) throw dynfl::Error("cannot write " + emit_tree);
    dynfl::WriteHst(out, drawn.front().tree);
  }
  const auto s = dynfl::MeasureExpectedStretch(input.instance, drawn);
  Checker checker;
  checker.Expect(s.dominance_violations == 0, "a sampled tree shrinks a pair");
  json summary{{"command", "embed"}, {"samples", samples}};
  if (stats) {
    summary["pairs"] = s.pairs;
    summary["dominance_violations"] = s.dominance_violations;
    summary["mean_stretch"] = s.mean_stretch;
    summary["max_expected_stretch"] = s.max_stretch;
  }
  return Finish(g, summary, checker);
}

int RunBenchCommand(const Globals& g, const std::string& config_path,
                    const std::string& out_dir, bool as_json) {
  std::ifstream in(config_path);
  if (!in) throw dynfl::Error("cannot open " + config_path);
  dynfl::BenchConfig config = dynfl::ParseBenchConfig(in);
  if (!out_dir.empty()) config.out_dir = out_dir;
  const auto rows = dynfl::RunBench(config);
  if (!g.quiet) {
    if (as_json) {
      dynfl::WriteBenchJson(std::cout, rows);
    } else {
      dynfl::WriteBenchTable(std::cout, rows);
    }
  }
  int failed = 0;
  for (const auto& r : rows) failed += !r.error.empty();
  return g.check && failed > 0 ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamic facility location toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Random seed")->default_val(1);
  app.add_option("--report", g.report, "Write the per-step ledger (JSONL)");
  app.add_option("--verify-every", g.verify_every,
                 "Run exact checks every K steps (0 disables)")
      ->default_val(10);
  app.add_flag("--quiet", g.quiet, "Suppress the summary");
  app.add_flag("--check", g.check, "Exit nonzero on any violated check");

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate an instance and stream");
  gen_cmd->add_option("--kind", gen.kind, "line | random-metric | hst")
      ->check(CLI::IsMember({"line", "random-metric", "hst"}));
  gen_cmd->add_option("--out", gen.out, "Stream file (default stdout)");
  gen_cmd->add_option("--tree-out", gen.tree_out, "Tree file for --kind hst");
  gen_cmd->add_option("--positions", gen.positions, "Line facility positions")
      ->delimiter(',');
  gen_cmd->add_option("--costs", gen.costs, "Line facility costs")
      ->delimiter(',');
  gen_cmd->add_option("--arrival-positions", gen.arrival_positions,
                      "Line client positions")
      ->delimiter(',');
  gen_cmd->add_option("--facilities", gen.metric.facilities);
  gen_cmd->add_option("--arrivals", gen.metric.arrivals);
  gen_cmd->add_option("--grid", gen.metric.grid);
  gen_cmd->add_option("--dimensions", gen.metric.dimensions);
  gen_cmd->add_option("--min-cost", gen.metric.min_cost);
  gen_cmd->add_option("--max-cost", gen.metric.max_cost);
  gen_cmd->add_option("--depart-probability", gen.metric.depart_probability);
  gen_cmd->add_option("--depth", gen.tree.depth, "Tree depth for --kind hst");
  gen_cmd->add_option("--leaves", gen.tree.leaves, "Leaves for --kind hst");

  std::string input;
  auto* oracle_cmd = app.add_subcommand("oracle", "Exact optimum of the live clients");
  oracle_cmd->add_option("--input", input)->required();

  double epsilon = 0.3;
  auto* online_cmd = app.add_subcommand("run-online", "Online algorithm with recourse");
  online_cmd->add_option("--input", input)->required();
  online_cmd->add_option("--epsilon", epsilon)->default_val(0.3);

  std::optional<double> gamma;
  double multiplier = dynfl::kDefaultIterationMultiplier;
  auto* inc_cmd = app.add_subcommand("run-incremental", "Incremental dynamic algorithm");
  inc_cmd->add_option("--input", input)->required();
  inc_cmd->add_option("--epsilon", epsilon)->default_val(0.3);
  inc_cmd->add_option("--gamma", gamma, "Confidence parameter (default n^3)");
  inc_cmd->add_option("--iteration-multiplier", multiplier)
      ->default_val(dynfl::kDefaultIterationMultiplier);

  std::string tree_path;
  auto* hst_cmd = app.add_subcommand("run-hst", "Fully dynamic algorithm on a tree");
  hst_cmd->add_option("--tree", tree_path)->required();
  hst_cmd->add_option("--input", input)->required();

  int samples = 1;
  std::string emit_tree;
  bool stats = false;
  auto* embed_cmd = app.add_subcommand("embed", "Sample trees for the facility metric");
  embed_cmd->add_option("--input", input)->required();
  embed_cmd->add_option("--samples", samples)->default_val(1);
  embed_cmd->add_option("--emit-tree", emit_tree, "Write the first tree here");
  embed_cmd->add_flag("--stats", stats, "Report stretch statistics");

  std::string config_path;
  std::string out_dir;
  bool as_json = false;
  auto* bench_cmd = app.add_subcommand("bench", "Run a benchmark matrix");
  bench_cmd->add_option("--config", config_path)->required();
  bench_cmd->add_option("--out-dir", out_dir, "Ledger directory");
  bench_cmd->add_flag("--json", as_json, "Print the summary as JSON");

  CLI11_PARSE(app, argc, argv);
  gen.tree.arrivals = gen.metric.arrivals;
  gen.tree.min_cost = gen.metric.min_cost;
  gen.tree.max_cost = gen.metric.max_cost;
  gen.tree.depart_probability = gen.metric.depart_probability;

  try {
    if (*gen_cmd) return RunGen(g, gen);
    if (*oracle_cmd) return RunOracle(g, input);
    if (*online_cmd) return RunOnlineCommand(g, input, epsilon);
    if (*inc_cmd) {
      return RunIncrementalCommand(g, input, epsilon, gamma, multiplier);
    }
    if (*hst_cmd) return RunHstCommand(g, tree_path, input);
    if (*embed_cmd) return RunEmbed(g, input, samples, emit_tree, stats);
    if (*bench_cmd) return RunBenchCommand(g, config_path, out_dir, as_json);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
