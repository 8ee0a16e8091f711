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

#ifndef DYNFL_HST_H_
#define DYNFL_HST_H_

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "dynfl/instance.h"
#include "dynfl/types.h"

namespace dynfl {

using NodeId = int;
inline constexpr NodeId kNoNode = -1;

// A hierarchically well-separated tree whose leaves are the facilities. The
// edge from a node at level L to its parent weighs 2^L, and all leaves sit at
// level 0. Every node carries the cost of its cheapest leaf descendant.
class Hst {
 public:
  Hst() = default;

  // parent[v] is kNoNode for the root only. leaf_facility[v] names the
  // facility at leaf v and is kNoFacility for internal nodes. Facilities must
  // be 0..costs.size()-1, each at exactly one leaf. Throws Error on a forest,
  // a cycle, unequal leaf depths or a bad facility mapping. Unary nodes are
  // added above the root until its cost is below 2^level.
  Hst(std::vector<NodeId> parent, std::vector<FacilityId> leaf_facility,
      std::vector<double> costs);

  int num_nodes() const { return static_cast<int>(parent_.size()); }
  int num_facilities() const { return static_cast<int>(leaf_of_.size()); }
  NodeId root() const { return root_; }
  int height() const { return level_[root_]; }

  NodeId parent(NodeId v) const { return parent_[v]; }
  std::span<const NodeId> children(NodeId v) const { return children_[v]; }
  int level(NodeId v) const { return level_[v]; }
  bool is_leaf(NodeId v) const { return level_[v] == 0; }
  // f_v: the cheapest leaf cost below v.
  double cost(NodeId v) const { return cost_[v]; }
  // Facility realizing cost(v); ties go to the smallest facility id.
  FacilityId cheapest_facility(NodeId v) const { return cheapest_[v]; }
  FacilityId facility_at(NodeId leaf) const { return facility_[leaf]; }
  NodeId leaf_of(FacilityId i) const { return leaf_of_[i]; }
  double facility_cost(FacilityId i) const { return cost_[leaf_of_[i]]; }

  NodeId Lca(NodeId a, NodeId b) const;
  bool IsAncestor(NodeId ancestor, NodeId v) const;
  // Tree distance between two nodes.
  Distance NodeDistance(NodeId a, NodeId b) const;
  // Tree distance between the leaves of two facilities.
  Distance FacilityDistance(FacilityId a, FacilityId b) const;
  // Distance from a leaf to the cheapest leaf of v, the facility copy that
  // opening v stands for.
  Distance CopyDistance(NodeId leaf, NodeId v) const;
  Distance diameter() const;

  // The facility metric induced on the leaves, with no client.
  Instance LeafInstance() const;

 private:
  std::vector<NodeId> parent_;
  std::vector<std::vector<NodeId>> children_;
  std::vector<int> level_;
  std::vector<double> cost_;
  std::vector<FacilityId> cheapest_;
  std::vector<FacilityId> facility_;
  std::vector<NodeId> leaf_of_;
  NodeId root_ = kNoNode;
};

// JSON tree format:
//   {"nodes": [{"id": ID, "children": [ID, ...]}, ...],
//    "leaves": [{"node": ID, "facility": i, "cost": c}, ...]}
// IDs may be integers or strings; nodes without children must be leaves.
Hst ParseHst(std::istream& in);
Hst LoadHstFile(const std::string& path);
void WriteHst(std::ostream& out, const Hst& hst);

}  // namespace dynfl

#endif  // DYNFL_HST_H_
