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

#include "dynfl/hst.h"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_map>

#include "json.hpp"

namespace dynfl {

namespace {

constexpr int kMaxLevel = 60;

Distance Pow2(int level) { return Distance{1} << level; }

}  // namespace

Hst::Hst(std::vector<NodeId> parent, std::vector<FacilityId> leaf_facility,
         std::vector<double> costs)
    : parent_(std::move(parent)), facility_(std::move(leaf_facility)) {
  const int n = num_nodes();
  if (n == 0) throw Error("tree has no node");
  if (static_cast<int>(facility_.size()) != n) {
    throw Error("leaf facility table has the wrong size");
  }
  children_.assign(n, {});
  for (NodeId v = 0; v < n; ++v) {
    const NodeId p = parent_[v];
    if (p == kNoNode) {
      if (root_ != kNoNode) throw Error("tree has more than one root");
      root_ = v;
    } else if (p < 0 || p >= n || p == v) {
      throw Error("node " + std::to_string(v) + " has an invalid parent");
    } else {
      children_[p].push_back(v);
    }
  }
  if (root_ == kNoNode) throw Error("tree has no root");

  std::vector<NodeId> order{root_};
  std::vector<int> depth(n, -1);
  depth[root_] = 0;
  for (size_t k = 0; k < order.size(); ++k) {
    for (NodeId c : children_[order[k]]) {
      depth[c] = depth[order[k]] + 1;
      order.push_back(c);
    }
  }
  if (static_cast<int>(order.size()) != n) {
    throw Error("tree is disconnected or has a cycle");
  }

  int leaf_depth = -1;
  leaf_of_.assign(costs.size(), kNoNode);
  for (NodeId v = 0; v < n; ++v) {
    if (!children_[v].empty()) {
      if (facility_[v] != kNoFacility) {
        throw Error("internal node " + std::to_string(v) + " has a facility");
      }
      continue;
    }
    if (leaf_depth == -1) leaf_depth = depth[v];
    if (depth[v] != leaf_depth) {
      throw Error("root-to-leaf paths have different lengths");
    }
    const FacilityId i = facility_[v];
    if (i < 0 || i >= static_cast<int>(costs.size())) {
      throw Error("leaf " + std::to_string(v) + " has no valid facility");
    }
    if (leaf_of_[i] != kNoNode) {
      throw Error("facility " + std::to_string(i) + " sits at two leaves");
    }
    leaf_of_[i] = v;
  }
  for (FacilityId i = 0; i < static_cast<int>(costs.size()); ++i) {
    if (leaf_of_[i] == kNoNode) {
      throw Error("facility " + std::to_string(i) + " has no leaf");
    }
    if (!(costs[i] >= 0.0) || !std::isfinite(costs[i])) {
      throw Error("facility costs must be finite and nonnegative");
    }
  }
  if (leaf_depth > kMaxLevel) throw Error("tree is too deep");

  level_.assign(n, 0);
  cost_.assign(n, 0.0);
  cheapest_.assign(n, kNoFacility);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const NodeId v = *it;
    level_[v] = leaf_depth - depth[v];
    if (children_[v].empty()) {
      cheapest_[v] = facility_[v];
      cost_[v] = costs[facility_[v]];
      continue;
    }
    for (NodeId c : children_[v]) {
      if (cheapest_[v] == kNoFacility || cost_[c] < cost_[v] ||
          (cost_[c] == cost_[v] && cheapest_[c] < cheapest_[v])) {
        cost_[v] = cost_[c];
        cheapest_[v] = cheapest_[c];
      }
    }
  }

  while (!(cost_[root_] < static_cast<double>(Pow2(level_[root_])))) {
    if (level_[root_] >= kMaxLevel) throw Error("facility cost is too large");
    const NodeId r = num_nodes();
    parent_.push_back(kNoNode);
    children_.push_back({root_});
    level_.push_back(level_[root_] + 1);
    cost_.push_back(cost_[root_]);
    cheapest_.push_back(cheapest_[root_]);
    facility_.push_back(kNoFacility);
    parent_[root_] = r;
    root_ = r;
  }
}

NodeId Hst::Lca(NodeId a, NodeId b) const {
  while (level_[a] < level_[b]) a = parent_[a];
  while (level_[b] < level_[a]) b = parent_[b];
  while (a != b) {
    a = parent_[a];
    b = parent_[b];
  }
  return a;
}

bool Hst::IsAncestor(NodeId ancestor, NodeId v) const {
  while (level_[v] < level_[ancestor]) v = parent_[v];
  return v == ancestor;
}

Distance Hst::NodeDistance(NodeId a, NodeId b) const {
  const int top = level_[Lca(a, b)];
  return 2 * Pow2(top) - Pow2(level_[a]) - Pow2(level_[b]);
}

Distance Hst::FacilityDistance(FacilityId a, FacilityId b) const {
  return NodeDistance(leaf_of_[a], leaf_of_[b]);
}

Distance Hst::CopyDistance(NodeId leaf, NodeId v) const {
  return NodeDistance(leaf, leaf_of_[cheapest_[v]]);
}

Distance Hst::diameter() const {
  NodeId v = root_;
  while (children_[v].size() == 1) v = children_[v][0];
  if (children_[v].empty()) return 0;
  return 2 * (Pow2(level_[v]) - 1);
}

Instance Hst::LeafInstance() const {
  const int nf = num_facilities();
  std::vector<double> costs(nf);
  std::vector<std::vector<Distance>> dist(nf, std::vector<Distance>(nf));
  for (FacilityId a = 0; a < nf; ++a) {
    costs[a] = facility_cost(a);
    for (FacilityId b = 0; b < nf; ++b) dist[a][b] = FacilityDistance(a, b);
  }
  return Instance(std::move(costs), std::move(dist));
}

Hst ParseHst(std::istream& in) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(std::string("tree file: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("nodes") || !doc["nodes"].is_array() ||
      !doc.contains("leaves") || !doc["leaves"].is_array()) {
    throw Error("tree file needs 'nodes' and 'leaves' arrays");
  }
  const auto key = [](const json& id) {
    if (!id.is_string() && !id.is_number_integer()) {
      throw Error("node ids must be strings or integers");
    }
    return id.dump();
  };
  std::unordered_map<std::string, NodeId> index;
  const auto& nodes = doc["nodes"];
  for (const auto& node : nodes) {
    if (!node.is_object() || !node.contains("id")) {
      throw Error("malformed tree node: " + node.dump());
    }
    const NodeId v = static_cast<NodeId>(index.size());
    if (!index.emplace(key(node["id"]), v).second) {
      throw Error("duplicate tree node " + node["id"].dump());
    }
  }
  std::vector<NodeId> parent(index.size(), kNoNode);
  for (size_t v = 0; v < nodes.size(); ++v) {
    if (!nodes[v].contains("children")) continue;
    for (const auto& c : nodes[v]["children"]) {
      const auto it = index.find(key(c));
      if (it == index.end()) throw Error("unknown child node " + c.dump());
      if (parent[it->second] != kNoNode) {
        throw Error("node " + c.dump() + " has two parents");
      }
      parent[it->second] = static_cast<NodeId>(v);
    }
  }
  const auto& leaves = doc["leaves"];
  std::vector<FacilityId> leaf_facility(index.size(), kNoFacility);
  std::vector<double> costs(leaves.size(), -1.0);
  for (const auto& leaf : leaves) {
    if (!leaf.contains("node") || !leaf.contains("facility") ||
        !leaf.contains("cost") || !leaf["facility"].is_number_integer() ||
        !leaf["cost"].is_number()) {
      throw Error("malformed leaf record: " + leaf.dump());
    }
    const auto it = index.find(key(leaf["node"]));
    if (it == index.end()) throw Error("unknown leaf node " + leaf.dump());
    const int i = leaf["facility"].get<int>();
    if (i < 0 || i >= static_cast<int>(costs.size()) || costs[i] >= 0.0) {
      throw Error("leaf facility ids must be dense and unique");
    }
    if (leaf_facility[it->second] != kNoFacility) {
      throw Error("node " + leaf["node"].dump() + " holds two facilities");
    }
    leaf_facility[it->second] = i;
    costs[i] = leaf["cost"].get<double>();
    if (costs[i] < 0.0) throw Error("negative facility cost");
  }
  return Hst(std::move(parent), std::move(leaf_facility), std::move(costs));
}

Hst LoadHstFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return ParseHst(in);
}

void WriteHst(std::ostream& out, const Hst& hst) {
  using nlohmann::json;
  json doc;
  doc["nodes"] = json::array();
  doc["leaves"] = json::array();
  for (NodeId v = 0; v < hst.num_nodes(); ++v) {
    json children = json::array();
    for (NodeId c : hst.children(v)) children.push_back(c);
    doc["nodes"].push_back({{"id", v}, {"children", std::move(children)}});
    if (hst.is_leaf(v)) {
      const FacilityId i = hst.facility_at(v);
      doc["leaves"].push_back(
          {{"node", v}, {"facility", i}, {"cost", hst.facility_cost(i)}});
    }
  }
  out << doc.dump() << '\n';
}

}  // namespace dynfl
