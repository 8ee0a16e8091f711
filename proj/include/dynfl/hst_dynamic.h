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

#ifndef DYNFL_HST_DYNAMIC_H_
#define DYNFL_HST_DYNAMIC_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dynfl/event_stream.h"
#include "dynfl/hst.h"
#include "dynfl/ledger.h"
#include "dynfl/types.h"

namespace dynfl {

using ClientHandle = int;

// Marking and opening status of every node.
struct HstStatus {
  std::vector<char> marked;
  std::vector<char> open;

  bool operator==(const HstStatus&) const = default;
};

// Static marking and opening rule. A node is marked iff
// alpha_v * N_v * 2^level(v) > f_v. A marked leaf is open; a marked internal
// node is open iff alpha_v * beta_v * N'_v * 2^level(v) > f_v, where N'_v sums
// N over the unmarked children of v. N may be fractional.
HstStatus OfflineMarkAndOpen(const Hst& hst, std::span<const double> n,
                             std::span<const int> alpha,
                             std::span<const int> beta);

// min(N_v * 2^level(v), f_v).
double LowerBound(const Hst& hst, NodeId v, double n);

// Sum of LowerBound over the highest unmarked nodes and the marked leaves.
double LowerBoundCertificate(const Hst& hst, std::span<const double> n,
                             std::span<const char> marked);

// Open node nearest to `leaf` in the tree metric over all nodes; ties go to
// the smallest node id. Linear scan. Returns kNoNode if nothing is open.
NodeId BruteForceNearestOpen(const Hst& hst, std::span<const char> open,
                             NodeId leaf);

// Cost of opening every open node (at the price of its cheapest leaf) and
// connecting count[i] clients at each facility i to the brute-force nearest
// open node's cheapest leaf.
double EvaluateOpenSet(const Hst& hst, std::span<const char> open,
                       std::span<const std::int64_t> count);

enum class HstEventKind { kMark, kUnmark, kOpen, kClose };

const char* HstEventKindName(HstEventKind kind);

struct HstEvent {
  HstEventKind kind = HstEventKind::kMark;
  NodeId node = kNoNode;
  // Opening or closing triggered by a child's marking status change.
  bool induced = false;

  bool operator==(const HstEvent&) const = default;
};

struct HstUpdate {
  ClientHandle client = -1;
  std::vector<HstEvent> events;
  // Existing clients whose facility changed.
  int reconnections = 0;
};

// Fully dynamic facility location on a tree metric. Clients live at leaves.
// After every update the marking and opening status equals
// OfflineMarkAndOpen on the current (N, alpha, beta), and every client is
// connected to its nearest open node.
class HstState {
 public:
  explicit HstState(const Hst& hst);

  const Hst& hst() const { return *hst_; }

  // Adds a client at the leaf of facility i.
  HstUpdate Insert(FacilityId i);
  // Throws Error if the handle is not a present client.
  HstUpdate Delete(ClientHandle c);

  // Throws Error if nothing is open.
  NodeId NearestOpen(NodeId leaf) const;

  std::int64_t n(NodeId v) const { return n_[v]; }
  std::int64_t n_prime(NodeId v) const { return n_prime_[v]; }
  int alpha(NodeId v) const { return alpha_[v]; }
  int beta(NodeId v) const { return beta_[v]; }
  bool marked(NodeId v) const { return marked_[v] != 0; }
  bool open(NodeId v) const { return open_[v] != 0; }
  NodeId psi(NodeId v) const { return psi_[v]; }
  // Unmarked children of v holding at least one client, in list order.
  std::vector<NodeId> UnmarkedChildren(NodeId v) const;

  bool has_client(ClientHandle c) const {
    return c >= 0 && c < static_cast<int>(clients_.size()) &&
           clients_[c].alive;
  }
  NodeId client_leaf(ClientHandle c) const { return clients_[c].leaf; }
  NodeId assignment(ClientHandle c) const { return clients_[c].node; }
  int num_clients() const { return num_clients_; }
  // Present clients at each facility.
  std::vector<std::int64_t> ClientCounts() const;

  double facility_cost() const { return facility_cost_; }
  Distance connection_cost() const { return connection_cost_; }
  double cost() const {
    return facility_cost_ + static_cast<double>(connection_cost_);
  }
  int marked_count() const { return marked_count_; }
  int open_count() const { return open_count_; }
  std::int64_t reconnections() const { return reconnections_; }
  std::int64_t status_changes() const { return status_changes_; }

  HstStatus Status() const { return {marked_, open_}; }
  std::vector<double> NVector() const;
  std::vector<int> AlphaVector() const;
  std::vector<int> BetaVector() const;
  double LowerBoundCertificate() const;

  // Compares the status with the offline rule. Cheap relative to a full
  // check; returns an empty string on success.
  std::string CheckStatus() const;
  // Compares every assignment with BruteForceNearestOpen.
  std::string CheckAssignments() const;
  // Counters, N', the child lists, psi, costs, status and assignments.
  std::vector<std::string> CheckAll() const;

 private:
  struct ClientRecord {
    NodeId leaf = kNoNode;
    NodeId node = kNoNode;
    int node_pos = -1;
    int leaf_pos = -1;
    bool alive = false;
  };

  bool MarkPredicate(NodeId v) const;
  bool OpenPredicate(NodeId v) const;
  NodeId HighestUnmarked(NodeId leaf) const;
  NodeId LowestMarked(NodeId leaf) const;

  void AdjustPath(NodeId leaf, int delta);
  void SyncListMembership(NodeId v);
  void SetMarked(NodeId v, bool marked);
  void SetOpen(NodeId v, bool open);
  void RefreshPsi(NodeId from);
  NodeId BestCandidate(NodeId v) const;
  void CascadeUp(NodeId leaf, std::vector<HstEvent>& events);
  void CascadeDown(NodeId leaf, std::vector<HstEvent>& events);
  int Reconnect();
  void CollectSubtree(NodeId v, std::vector<ClientHandle>& out);
  void Attach(ClientHandle c, NodeId node);
  void Detach(ClientHandle c);

  const Hst* hst_;
  std::vector<std::int64_t> n_;
  std::vector<std::int64_t> n_prime_;
  std::vector<int> alpha_;
  std::vector<int> beta_;
  std::vector<char> marked_;
  std::vector<char> open_;
  std::vector<NodeId> psi_;
  std::vector<NodeId> head_;
  std::vector<NodeId> prev_;
  std::vector<NodeId> next_;
  std::vector<char> listed_;
  std::vector<ClientRecord> clients_;
  std::vector<std::vector<ClientHandle>> at_node_;
  std::vector<std::vector<ClientHandle>> at_leaf_;
  std::vector<NodeId> touched_;
  std::vector<char> was_open_;
  std::vector<char> is_touched_;
  std::vector<std::uint32_t> seen_;
  std::uint32_t stamp_ = 0;
  double facility_cost_ = 0.0;
  Distance connection_cost_ = 0;
  int marked_count_ = 0;
  int open_count_ = 0;
  int num_clients_ = 0;
  std::int64_t reconnections_ = 0;
  std::int64_t status_changes_ = 0;
};

struct HstRunOptions {
  // Full consistency check every k events (and after the last); 0 disables.
  int verify_every = 0;
};

struct HstRun {
  RunLedger ledger;
  std::int64_t reconnections = 0;
  std::int64_t events = 0;
  std::vector<std::string> violations;
};

// Replays an arrive/depart stream. Arrivals name their leaf through `nearest`
// or are snapped to the closest facility of their distance vector.
HstRun RunHst(const Hst& hst, std::span<const Event> events,
              const HstRunOptions& options = {});

}  // namespace dynfl

#endif  // DYNFL_HST_DYNAMIC_H_
