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

#ifndef DYNFL_LEDGER_H_
#define DYNFL_LEDGER_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace dynfl {

// One time step of a run. Fields that an algorithm does not produce stay
// empty and are omitted from the serialized record.
struct StepRecord {
  std::int64_t t = 0;
  std::string event;
  int stage = 0;
  double cost = 0.0;
  double frozen_cost = 0.0;
  double grand_total = 0.0;
  std::optional<double> opt;
  std::optional<double> ratio;
  double delta_t = 0.0;
  std::optional<double> phi;
  std::optional<double> last;
  std::int64_t client_recourse_cum = 0;
  std::int64_t facility_recourse_cum = 0;
  std::optional<std::int64_t> fl_iterate_calls;
  std::optional<std::int64_t> sampled_iterations;
  std::optional<double> lb_certificate;
  std::optional<int> marked_count;
  std::optional<int> open_count;
  double wall_us = 0.0;

  bool operator==(const StepRecord&) const = default;
};

struct RunMetadata {
  std::string algorithm;
  std::string input;
  std::optional<double> epsilon;
  std::optional<double> gamma;
  std::optional<std::uint64_t> seed;

  bool operator==(const RunMetadata&) const = default;
};

struct RunLedger {
  RunMetadata metadata;
  std::vector<StepRecord> records;

  bool operator==(const RunLedger&) const = default;
};

// Line-delimited JSON: a metadata line followed by one line per record.
void WriteLedger(std::ostream& out, const RunLedger& ledger);
RunLedger ReadLedger(std::istream& in);
void WriteLedgerFile(const std::string& path, const RunLedger& ledger);

std::string StepRecordToJson(const StepRecord& record);

}  // namespace dynfl

#endif  // DYNFL_LEDGER_H_
