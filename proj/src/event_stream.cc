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

#include "dynfl/event_stream.h"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

#include "json.hpp"

namespace dynfl {
namespace {

using nlohmann::json;

Distance ParseDistance(const json& v) {
  if (v.is_number_integer()) return v.get<Distance>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (std::floor(d) == d) return static_cast<Distance>(d);
  }
  throw Error("non-integer distance: " + v.dump());
}

std::vector<Distance> ParseDistanceRow(const json& row) {
  if (!row.is_array()) throw Error("distance row is not an array");
  std::vector<Distance> out;
  out.reserve(row.size());
  for (const auto& v : row) out.push_back(ParseDistance(v));
  return out;
}

Instance ParseHeader(const json& rec) {
  if (rec.value("type", "") != "header") {
    throw Error("first record must be a header");
  }
  if (!rec.contains("facilities") || !rec["facilities"].is_array()) {
    throw Error("header lacks a facilities array");
  }
  const auto& facilities = rec["facilities"];
  std::vector<double> costs(facilities.size(), 0.0);
  std::vector<bool> seen(facilities.size(), false);
  for (const auto& f : facilities) {
    if (!f.contains("id") || !f.contains("cost") ||
        !f["id"].is_number_integer() || !f["cost"].is_number()) {
      throw Error("malformed facility record: " + f.dump());
    }
    const auto id = f["id"].get<long long>();
    if (id < 0 || id >= static_cast<long long>(costs.size()) || seen[id]) {
      throw Error("facility ids must be dense and unique");
    }
    seen[id] = true;
    costs[id] = f["cost"].get<double>();
  }
  if (!rec.contains("fdist") || !rec["fdist"].is_array()) {
    throw Error("header lacks an fdist matrix");
  }
  std::vector<std::vector<Distance>> fdist;
  for (const auto& row : rec["fdist"]) fdist.push_back(ParseDistanceRow(row));
  return Instance(std::move(costs), std::move(fdist));
}

Event ParseEvent(const json& rec, int num_facilities) {
  Event e;
  const std::string type = rec.value("type", "");
  if (!rec.contains("client") || !rec["client"].is_string()) {
    throw Error("event lacks a client id: " + rec.dump());
  }
  e.client = rec["client"].get<std::string>();
  if (type == "arrive") {
    e.kind = EventKind::kArrive;
    if (rec.contains("dist")) {
      e.dist = ParseDistanceRow(rec["dist"]);
      if (static_cast<int>(e.dist.size()) != num_facilities) {
        throw Error("arrival of '" + e.client + "' has wrong vector length");
      }
      for (Distance d : e.dist) {
        if (d < 0) throw Error("negative distance for '" + e.client + "'");
      }
    } else if (rec.contains("nearest")) {
      if (!rec["nearest"].is_number_integer()) {
        throw Error("nearest must be a facility id");
      }
      const int f = rec["nearest"].get<int>();
      if (f < 0 || f >= num_facilities) {
        throw Error("arrival of '" + e.client + "' names unknown facility");
      }
      e.nearest = f;
    } else {
      throw Error("arrival of '" + e.client + "' has no payload");
    }
  } else if (type == "depart") {
    e.kind = EventKind::kDepart;
  } else {
    throw Error("unknown record type '" + type + "'");
  }
  return e;
}

}  // namespace

int LoadedInput::num_arrivals() const {
  int n = 0;
  for (const auto& e : events) n += e.kind == EventKind::kArrive;
  return n;
}

bool LoadedInput::has_departures() const {
  for (const auto& e : events) {
    if (e.kind == EventKind::kDepart) return true;
  }
  return false;
}

LoadedInput LoadInput(std::istream& in, bool validate_metric) {
  LoadedInput out;
  std::string line;
  bool have_header = false;
  std::unordered_set<std::string> live;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::parse_error& e) {
      throw Error("line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!rec.is_object()) {
      throw Error("line " + std::to_string(line_no) + ": not an object");
    }
    if (!have_header) {
      out.instance = ParseHeader(rec);
      have_header = true;
      continue;
    }
    Event e = ParseEvent(rec, out.instance.num_facilities());
    if (e.kind == EventKind::kArrive) {
      if (!live.insert(e.client).second) {
        throw Error("client '" + e.client + "' arrived twice");
      }
    } else if (live.erase(e.client) == 0) {
      throw Error("depart of unknown client '" + e.client + "'");
    }
    out.events.push_back(std::move(e));
  }
  if (!have_header) throw Error("empty input: missing header");
  if (validate_metric) {
    Instance probe = out.instance;
    for (const auto& e : out.events) {
      if (e.kind == EventKind::kArrive && !e.dist.empty() &&
          !probe.FindClient(e.client)) {
        probe.AddClient(e.client, e.dist);
      }
    }
    if (!probe.SatisfiesTriangleInequality()) {
      throw Error("input violates the triangle inequality");
    }
  }
  return out;
}

LoadedInput LoadInputFile(const std::string& path, bool validate_metric) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return LoadInput(in, validate_metric);
}

void WriteInput(std::ostream& out, const Instance& instance,
                const std::vector<Event>& events) {
  json header;
  header["type"] = "header";
  header["facilities"] = json::array();
  const int n = instance.num_facilities();
  for (int i = 0; i < n; ++i) {
    header["facilities"].push_back(
        {{"id", i}, {"cost", instance.opening_cost(i)}});
  }
  header["fdist"] = json::array();
  for (int a = 0; a < n; ++a) {
    json row = json::array();
    for (int b = 0; b < n; ++b) row.push_back(instance.facility_distance(a, b));
    header["fdist"].push_back(std::move(row));
  }
  out << header.dump() << '\n';
  for (const auto& e : events) {
    json rec;
    rec["type"] = e.kind == EventKind::kArrive ? "arrive" : "depart";
    rec["client"] = e.client;
    if (e.kind == EventKind::kArrive) {
      if (e.nearest) {
        rec["nearest"] = *e.nearest;
      } else {
        rec["dist"] = e.dist;
      }
    }
    out << rec.dump() << '\n';
  }
}

ClientIndex RegisterArrival(Instance& instance, const Event& event) {
  if (event.kind != EventKind::kArrive) {
    throw Error("RegisterArrival called with a departure");
  }
  if (event.nearest) {
    return instance.AddCollocatedClient(event.client, *event.nearest);
  }
  return instance.AddClient(event.client, event.dist);
}

}  // namespace dynfl
