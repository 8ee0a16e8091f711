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

#include "dynfl/ledger.h"

#include <fstream>
#include <istream>
#include <ostream>

#include "dynfl/types.h"
#include "json.hpp"

namespace dynfl {
namespace {

using nlohmann::json;

template <typename T>
void PutOptional(json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

template <typename T>
void GetOptional(const json& j, const char* key, std::optional<T>& v) {
  if (j.contains(key)) v = j[key].get<T>();
}

json ToJson(const StepRecord& r) {
  json j;
  j["t"] = r.t;
  j["event"] = r.event;
  j["stage"] = r.stage;
  j["cost"] = r.cost;
  j["frozen_cost"] = r.frozen_cost;
  j["grand_total"] = r.grand_total;
  PutOptional(j, "opt", r.opt);
  PutOptional(j, "ratio", r.ratio);
  j["delta_t"] = r.delta_t;
  PutOptional(j, "phi", r.phi);
  PutOptional(j, "last", r.last);
  j["client_recourse_cum"] = r.client_recourse_cum;
  j["facility_recourse_cum"] = r.facility_recourse_cum;
  PutOptional(j, "fl_iterate_calls", r.fl_iterate_calls);
  PutOptional(j, "sampled_iterations", r.sampled_iterations);
  PutOptional(j, "lb_certificate", r.lb_certificate);
  PutOptional(j, "marked_count", r.marked_count);
  PutOptional(j, "open_count", r.open_count);
  j["wall_us"] = r.wall_us;
  return j;
}

StepRecord FromJson(const json& j) {
  StepRecord r;
  r.t = j.at("t").get<std::int64_t>();
  r.event = j.at("event").get<std::string>();
  r.stage = j.at("stage").get<int>();
  r.cost = j.at("cost").get<double>();
  r.frozen_cost = j.at("frozen_cost").get<double>();
  r.grand_total = j.at("grand_total").get<double>();
  GetOptional(j, "opt", r.opt);
  GetOptional(j, "ratio", r.ratio);
  r.delta_t = j.at("delta_t").get<double>();
  GetOptional(j, "phi", r.phi);
  GetOptional(j, "last", r.last);
  r.client_recourse_cum = j.at("client_recourse_cum").get<std::int64_t>();
  r.facility_recourse_cum = j.at("facility_recourse_cum").get<std::int64_t>();
  GetOptional(j, "fl_iterate_calls", r.fl_iterate_calls);
  GetOptional(j, "sampled_iterations", r.sampled_iterations);
  GetOptional(j, "lb_certificate", r.lb_certificate);
  GetOptional(j, "marked_count", r.marked_count);
  GetOptional(j, "open_count", r.open_count);
  r.wall_us = j.at("wall_us").get<double>();
  return r;
}

}  // namespace

std::string StepRecordToJson(const StepRecord& record) {
  return ToJson(record).dump();
}

void WriteLedger(std::ostream& out, const RunLedger& ledger) {
  json meta;
  meta["type"] = "run";
  meta["algorithm"] = ledger.metadata.algorithm;
  meta["input"] = ledger.metadata.input;
  PutOptional(meta, "epsilon", ledger.metadata.epsilon);
  PutOptional(meta, "gamma", ledger.metadata.gamma);
  PutOptional(meta, "seed", ledger.metadata.seed);
  out << meta.dump() << '\n';
  for (const auto& r : ledger.records) out << ToJson(r).dump() << '\n';
}

RunLedger ReadLedger(std::istream& in) {
  RunLedger ledger;
  std::string line;
  bool have_meta = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const json j = json::parse(line);
    if (!have_meta) {
      if (j.value("type", "") != "run") throw Error("ledger lacks metadata");
      ledger.metadata.algorithm = j.at("algorithm").get<std::string>();
      ledger.metadata.input = j.at("input").get<std::string>();
      GetOptional(j, "epsilon", ledger.metadata.epsilon);
      GetOptional(j, "gamma", ledger.metadata.gamma);
      GetOptional(j, "seed", ledger.metadata.seed);
      have_meta = true;
      continue;
    }
    ledger.records.push_back(FromJson(j));
  }
  if (!have_meta) throw Error("empty ledger");
  return ledger;
}

void WriteLedgerFile(const std::string& path, const RunLedger& ledger) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  WriteLedger(out, ledger);
}

}  // namespace dynfl
