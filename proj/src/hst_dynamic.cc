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

#include "dynfl/hst_dynamic.h"

#include <chrono>
#include <cmath>
#include <limits>
#include <unordered_map>

namespace dynfl {

namespace {

double Scale(int level) { return std::ldexp(1.0, level); }

bool MarkRule(double alpha, double n, int level, double f) {
  return alpha * n * Scale(level) > f;
}

bool OpenRule(double alpha, double beta, double n_prime, int level, double f) {
  return alpha * beta * n_prime * Scale(level) > f;
}

// Higher level first, then smaller id.
bool Better(const Hst& hst, NodeId a, NodeId b) {
  if (a == kNoNode) return false;
  if (b == kNoNode) return true;
  if (hst.level(a) != hst.level(b)) return hst.level(a) > hst.level(b);
  return a < b;
}

void CollectPsi(const Hst& hst, std::span<const char> open, NodeId v,
                NodeId& best) {
  for (NodeId c : hst.children(v)) {
    if (open[c] && Better(hst, c, best)) best = c;
    CollectPsi(hst, open, c, best);
  }
}

}  // namespace

HstStatus OfflineMarkAndOpen(const Hst& hst, std::span<const double> n,
                             std::span<const int> alpha,
                             std::span<const int> beta) {
  const int nodes = hst.num_nodes();
  if (static_cast<int>(n.size()) != nodes ||
      static_cast<int>(alpha.size()) != nodes ||
      static_cast<int>(beta.size()) != nodes) {
    throw Error("status vectors must have one entry per node");
  }
  HstStatus s;
  s.marked.assign(nodes, 0);
  s.open.assign(nodes, 0);
  for (NodeId v = 0; v < nodes; ++v) {
    s.marked[v] = MarkRule(alpha[v], n[v], hst.level(v), hst.cost(v));
  }
  for (NodeId v = 0; v < nodes; ++v) {
    if (!s.marked[v]) continue;
    if (hst.is_leaf(v)) {
      s.open[v] = 1;
      continue;
    }
    double n_prime = 0.0;
    for (NodeId c : hst.children(v)) {
      if (!s.marked[c]) n_prime += n[c];
    }
    s.open[v] = OpenRule(alpha[v], beta[v], n_prime, hst.level(v), hst.cost(v));
  }
  return s;
}

double LowerBound(const Hst& hst, NodeId v, double n) {
  return std::min(n * Scale(hst.level(v)), hst.cost(v));
}

double LowerBoundCertificate(const Hst& hst, std::span<const double> n,
                             std::span<const char> marked) {
  double sum = 0.0;
  std::vector<NodeId> stack{hst.root()};
  while (!stack.empty()) {
    const NodeId v = stack.back();
    stack.pop_back();
    if (!marked[v] || hst.is_leaf(v)) {
      sum += LowerBound(hst, v, n[v]);
      continue;
    }
    for (NodeId c : hst.children(v)) stack.push_back(c);
  }
  return sum;
}

NodeId BruteForceNearestOpen(const Hst& hst, std::span<const char> open,
                             NodeId leaf) {
  NodeId best = kNoNode;
  Distance best_d = std::numeric_limits<Distance>::max();
  for (NodeId w = 0; w < hst.num_nodes(); ++w) {
    if (!open[w]) continue;
    const Distance d = hst.NodeDistance(leaf, w);
    if (d < best_d) {
      best_d = d;
      best = w;
    }
  }
  return best;
}

double EvaluateOpenSet(const Hst& hst, std::span<const char> open,
                       std::span<const std::int64_t> count) {
  double total = 0.0;
  for (NodeId v = 0; v < hst.num_nodes(); ++v) {
    if (open[v]) total += hst.cost(v);
  }
  for (FacilityId i = 0; i < hst.num_facilities(); ++i) {
    if (count[i] == 0) continue;
    const NodeId leaf = hst.leaf_of(i);
    const NodeId w = BruteForceNearestOpen(hst, open, leaf);
    if (w == kNoNode) throw Error("clients present but nothing is open");
    total += static_cast<double>(count[i] * hst.CopyDistance(leaf, w));
  }
  return total;
}

const char* HstEventKindName(HstEventKind kind) {
  switch (kind) {
    case HstEventKind::kMark:
      return "mark";
    case HstEventKind::kUnmark:
      return "unmark";
    case HstEventKind::kOpen:
      return "open";
    case HstEventKind::kClose:
      return "close";
  }
  return "?";
}

HstState::HstState(const Hst& hst)
    : hst_(&hst),
      n_(hst.num_nodes(), 0),
      n_prime_(hst.num_nodes(), 0),
      alpha_(hst.num_nodes(), 1),
      beta_(hst.num_nodes(), 1),
      marked_(hst.num_nodes(), 0),
      open_(hst.num_nodes(), 0),
      psi_(hst.num_nodes(), kNoNode),
      head_(hst.num_nodes(), kNoNode),
      prev_(hst.num_nodes(), kNoNode),
      next_(hst.num_nodes(), kNoNode),
      listed_(hst.num_nodes(), 0),
      at_node_(hst.num_nodes()),
      at_leaf_(hst.num_nodes()),
      was_open_(hst.num_nodes(), 0),
      is_touched_(hst.num_nodes(), 0) {}

std::vector<NodeId> HstState::UnmarkedChildren(NodeId v) const {
  std::vector<NodeId> out;
  for (NodeId c = head_[v]; c != kNoNode; c = next_[c]) out.push_back(c);
  return out;
}

std::vector<std::int64_t> HstState::ClientCounts() const {
  std::vector<std::int64_t> out(hst_->num_facilities(), 0);
  for (FacilityId i = 0; i < hst_->num_facilities(); ++i) {
    out[i] = static_cast<std::int64_t>(at_leaf_[hst_->leaf_of(i)].size());
  }
  return out;
}

std::vector<double> HstState::NVector() const {
  return {n_.begin(), n_.end()};
}

std::vector<int> HstState::AlphaVector() const { return alpha_; }
std::vector<int> HstState::BetaVector() const { return beta_; }

double HstState::LowerBoundCertificate() const {
  const std::vector<double> n = NVector();
  return dynfl::LowerBoundCertificate(*hst_, n, marked_);
}

bool HstState::MarkPredicate(NodeId v) const {
  return MarkRule(alpha_[v], static_cast<double>(n_[v]), hst_->level(v),
                  hst_->cost(v));
}

bool HstState::OpenPredicate(NodeId v) const {
  if (hst_->is_leaf(v)) return true;
  return OpenRule(alpha_[v], beta_[v], static_cast<double>(n_prime_[v]),
                  hst_->level(v), hst_->cost(v));
}

NodeId HstState::HighestUnmarked(NodeId leaf) const {
  if (marked_[leaf]) return kNoNode;
  NodeId u = leaf;
  while (hst_->parent(u) != kNoNode && !marked_[hst_->parent(u)]) {
    u = hst_->parent(u);
  }
  return u;
}

NodeId HstState::LowestMarked(NodeId leaf) const {
  if (marked_[leaf]) return leaf;
  return hst_->parent(HighestUnmarked(leaf));
}

void HstState::AdjustPath(NodeId leaf, int delta) {
  for (NodeId u = leaf; u != kNoNode; u = hst_->parent(u)) {
    n_[u] += delta;
    const NodeId p = hst_->parent(u);
    if (p != kNoNode && !marked_[u]) n_prime_[p] += delta;
    SyncListMembership(u);
  }
}

void HstState::SyncListMembership(NodeId v) {
  const NodeId p = hst_->parent(v);
  const bool want = p != kNoNode && !marked_[v] && n_[v] >= 1;
  if (want == static_cast<bool>(listed_[v])) return;
  if (want) {
    prev_[v] = kNoNode;
    next_[v] = head_[p];
    if (head_[p] != kNoNode) prev_[head_[p]] = v;
    head_[p] = v;
  } else {
    if (prev_[v] != kNoNode) {
      next_[prev_[v]] = next_[v];
    } else {
      head_[p] = next_[v];
    }
    if (next_[v] != kNoNode) prev_[next_[v]] = prev_[v];
    prev_[v] = next_[v] = kNoNode;
  }
  listed_[v] = want;
}

void HstState::SetMarked(NodeId v, bool marked) {
  if (static_cast<bool>(marked_[v]) == marked) return;
  marked_[v] = marked;
  marked_count_ += marked ? 1 : -1;
  const NodeId p = hst_->parent(v);
  if (p != kNoNode) n_prime_[p] += marked ? -n_[v] : n_[v];
  SyncListMembership(v);
}

void HstState::SetOpen(NodeId v, bool open) {
  if (static_cast<bool>(open_[v]) == open) return;
  if (!is_touched_[v]) {
    is_touched_[v] = 1;
    was_open_[v] = open_[v];
    touched_.push_back(v);
  }
  open_[v] = open;
  open_count_ += open ? 1 : -1;
  facility_cost_ += open ? hst_->cost(v) : -hst_->cost(v);
  if (open_count_ == 0) facility_cost_ = 0.0;
  ++status_changes_;
  RefreshPsi(hst_->parent(v));
}

NodeId HstState::BestCandidate(NodeId v) const {
  NodeId best = kNoNode;
  for (NodeId c : hst_->children(v)) {
    const NodeId cand = open_[c] ? c : psi_[c];
    if (Better(*hst_, cand, best)) best = cand;
  }
  return best;
}

void HstState::RefreshPsi(NodeId from) {
  for (NodeId u = from; u != kNoNode; u = hst_->parent(u)) {
    const NodeId best = BestCandidate(u);
    if (best == psi_[u]) break;
    psi_[u] = best;
  }
}

void HstState::CascadeUp(NodeId leaf, std::vector<HstEvent>& events) {
  for (;;) {
    const NodeId u = HighestUnmarked(leaf);
    if (u != kNoNode && MarkPredicate(u)) {
      SetMarked(u, true);
      alpha_[u] = 2;
      beta_[u] = 1;
      SetOpen(u, OpenPredicate(u));
      events.push_back({HstEventKind::kMark, u, false});
      const NodeId w = hst_->parent(u);
      if (w != kNoNode && open_[w] && !OpenPredicate(w)) {
        SetOpen(w, false);
        beta_[w] = 1;
        events.push_back({HstEventKind::kClose, w, true});
      }
      continue;
    }
    const NodeId m = LowestMarked(leaf);
    if (m != kNoNode && !hst_->is_leaf(m) && !open_[m] && OpenPredicate(m)) {
      SetOpen(m, true);
      beta_[m] = 2;
      events.push_back({HstEventKind::kOpen, m, false});
      continue;
    }
    break;
  }
}

void HstState::CascadeDown(NodeId leaf, std::vector<HstEvent>& events) {
  for (;;) {
    const NodeId u = LowestMarked(leaf);
    if (u == kNoNode) break;
    if (!MarkPredicate(u)) {
      SetOpen(u, false);
      SetMarked(u, false);
      alpha_[u] = 1;
      beta_[u] = 1;
      events.push_back({HstEventKind::kUnmark, u, false});
      const NodeId w = hst_->parent(u);
      if (w != kNoNode && marked_[w] && !open_[w] && OpenPredicate(w)) {
        SetOpen(w, true);
        beta_[w] = 2;
        events.push_back({HstEventKind::kOpen, w, true});
      }
      continue;
    }
    if (!hst_->is_leaf(u) && open_[u] && !OpenPredicate(u)) {
      SetOpen(u, false);
      beta_[u] = 1;
      events.push_back({HstEventKind::kClose, u, false});
      continue;
    }
    break;
  }
}

void HstState::CollectSubtree(NodeId v, std::vector<ClientHandle>& out) {
  if (hst_->is_leaf(v)) {
    for (ClientHandle c : at_leaf_[v]) {
      if (seen_[c] != stamp_) {
        seen_[c] = stamp_;
        out.push_back(c);
      }
    }
    return;
  }
  for (NodeId c = head_[v]; c != kNoNode; c = next_[c]) CollectSubtree(c, out);
}

int HstState::Reconnect() {
  if (++stamp_ == 0) {
    std::fill(seen_.begin(), seen_.end(), 0);
    stamp_ = 1;
  }
  std::vector<ClientHandle> candidates;
  for (NodeId v : touched_) {
    is_touched_[v] = 0;
    if (open_[v] == was_open_[v]) continue;
    if (!open_[v]) {
      for (ClientHandle c : at_node_[v]) {
        if (seen_[c] != stamp_) {
          seen_[c] = stamp_;
          candidates.push_back(c);
        }
      }
      continue;
    }
    CollectSubtree(v, candidates);
    NodeId below = v;
    for (NodeId w = hst_->parent(v);
         w != kNoNode && !open_[w] && psi_[w] == v; w = hst_->parent(w)) {
      for (NodeId c = head_[w]; c != kNoNode; c = next_[c]) {
        if (c != below) CollectSubtree(c, candidates);
      }
      below = w;
    }
  }
  touched_.clear();
  int moved = 0;
  for (ClientHandle c : candidates) {
    const NodeId target = NearestOpen(clients_[c].leaf);
    if (target == clients_[c].node) continue;
    Detach(c);
    Attach(c, target);
    ++moved;
  }
  return moved;
}

void HstState::Attach(ClientHandle c, NodeId node) {
  ClientRecord& rec = clients_[c];
  rec.node = node;
  rec.node_pos = static_cast<int>(at_node_[node].size());
  at_node_[node].push_back(c);
  connection_cost_ += hst_->CopyDistance(rec.leaf, node);
}

void HstState::Detach(ClientHandle c) {
  ClientRecord& rec = clients_[c];
  auto& list = at_node_[rec.node];
  const ClientHandle moved = list.back();
  list[rec.node_pos] = moved;
  clients_[moved].node_pos = rec.node_pos;
  list.pop_back();
  connection_cost_ -= hst_->CopyDistance(rec.leaf, rec.node);
  rec.node = kNoNode;
  rec.node_pos = -1;
}

NodeId HstState::NearestOpen(NodeId leaf) const {
  for (NodeId u = leaf; u != kNoNode; u = hst_->parent(u)) {
    if (open_[u]) return u;
    if (psi_[u] != kNoNode) return psi_[u];
  }
  throw Error("no open facility");
}

HstUpdate HstState::Insert(FacilityId i) {
  if (i < 0 || i >= hst_->num_facilities()) {
    throw Error("unknown facility " + std::to_string(i));
  }
  const NodeId leaf = hst_->leaf_of(i);
  HstUpdate update;
  AdjustPath(leaf, +1);
  CascadeUp(leaf, update.events);
  update.reconnections = Reconnect();
  const ClientHandle c = static_cast<ClientHandle>(clients_.size());
  ClientRecord rec;
  rec.leaf = leaf;
  rec.alive = true;
  rec.leaf_pos = static_cast<int>(at_leaf_[leaf].size());
  clients_.push_back(rec);
  seen_.push_back(0);
  at_leaf_[leaf].push_back(c);
  Attach(c, NearestOpen(leaf));
  ++num_clients_;
  reconnections_ += update.reconnections;
  update.client = c;
  return update;
}

HstUpdate HstState::Delete(ClientHandle c) {
  if (!has_client(c)) throw Error("delete of absent client " + std::to_string(c));
  Detach(c);
  ClientRecord& rec = clients_[c];
  const NodeId leaf = rec.leaf;
  auto& list = at_leaf_[leaf];
  const ClientHandle moved = list.back();
  list[rec.leaf_pos] = moved;
  clients_[moved].leaf_pos = rec.leaf_pos;
  list.pop_back();
  rec.alive = false;
  rec.leaf_pos = -1;
  --num_clients_;
  HstUpdate update;
  update.client = c;
  AdjustPath(leaf, -1);
  CascadeDown(leaf, update.events);
  update.reconnections = Reconnect();
  reconnections_ += update.reconnections;
  return update;
}

std::string HstState::CheckStatus() const {
  const std::vector<double> n = NVector();
  const HstStatus offline = OfflineMarkAndOpen(*hst_, n, alpha_, beta_);
  for (NodeId v = 0; v < hst_->num_nodes(); ++v) {
    if (offline.marked[v] != marked_[v] || offline.open[v] != open_[v]) {
      return "node " + std::to_string(v) + " status differs from offline rule";
    }
  }
  return {};
}

std::string HstState::CheckAssignments() const {
  for (ClientHandle c = 0; c < static_cast<int>(clients_.size()); ++c) {
    if (!clients_[c].alive) continue;
    const NodeId expect = BruteForceNearestOpen(*hst_, open_, clients_[c].leaf);
    if (expect != clients_[c].node) {
      return "client " + std::to_string(c) + " is at node " +
             std::to_string(clients_[c].node) + ", nearest open is " +
             std::to_string(expect);
    }
  }
  return {};
}

std::vector<std::string> HstState::CheckAll() const {
  std::vector<std::string> out;
  const Hst& t = *hst_;
  const int nodes = t.num_nodes();
  const auto fail = [&](NodeId v, const std::string& what) {
    out.push_back("node " + std::to_string(v) + ": " + what);
  };

  std::vector<std::int64_t> n(nodes, 0);
  for (NodeId v = 0; v < nodes; ++v) {
    if (!t.is_leaf(v)) continue;
    for (NodeId u = v; u != kNoNode; u = t.parent(u)) {
      n[u] += static_cast<std::int64_t>(at_leaf_[v].size());
    }
  }
  int marked = 0;
  int open = 0;
  double facility = 0.0;
  for (NodeId v = 0; v < nodes; ++v) {
    if (n[v] != n_[v]) fail(v, "N is stale");
    marked += marked_[v];
    open += open_[v];
    if (open_[v]) facility += t.cost(v);
    if (open_[v] && !marked_[v]) fail(v, "open but unmarked");
    const NodeId p = t.parent(v);
    if (marked_[v] && p != kNoNode && !marked_[p]) {
      fail(v, "marked below an unmarked parent");
    }
    std::int64_t n_prime = 0;
    std::vector<char> expect_listed(nodes, 0);
    bool lowest = marked_[v] != 0;
    for (NodeId c : t.children(v)) {
      if (marked_[c]) lowest = false;
      if (!marked_[c]) n_prime += n_[c];
      expect_listed[c] = !marked_[c] && n_[c] >= 1;
    }
    if (lowest && !open_[v]) fail(v, "lowest marked node is closed");
    if (n_prime != n_prime_[v]) fail(v, "N' is stale");
    int listed = 0;
    NodeId back = kNoNode;
    for (NodeId c = head_[v]; c != kNoNode; c = next_[c]) {
      if (prev_[c] != back) fail(v, "broken child list links");
      if (t.parent(c) != v || !expect_listed[c]) fail(v, "wrong child listed");
      back = c;
      ++listed;
    }
    int expected = 0;
    for (NodeId c : t.children(v)) expected += expect_listed[c];
    if (listed != expected) fail(v, "child list is incomplete");
    NodeId psi = kNoNode;
    CollectPsi(t, open_, v, psi);
    if (psi != psi_[v]) fail(v, "psi is stale");
  }
  if (marked != marked_count_) out.push_back("marked count is stale");
  if (open != open_count_) out.push_back("open count is stale");
  if (std::abs(facility - facility_cost_) > 1e-6 * (1.0 + facility)) {
    out.push_back("facility cost is stale");
  }
  Distance connection = 0;
  for (ClientHandle c = 0; c < static_cast<int>(clients_.size()); ++c) {
    const ClientRecord& rec = clients_[c];
    if (!rec.alive) continue;
    if (at_node_[rec.node][rec.node_pos] != c) {
      out.push_back("client " + std::to_string(c) + " missing at its node");
    }
    connection += t.CopyDistance(rec.leaf, rec.node);
  }
  if (connection != connection_cost_) out.push_back("connection cost is stale");
  if (std::string s = CheckStatus(); !s.empty()) out.push_back(s);
  if (std::string s = CheckAssignments(); !s.empty()) out.push_back(s);
  return out;
}

HstRun RunHst(const Hst& hst, std::span<const Event> events,
              const HstRunOptions& options) {
  HstRun run;
  run.ledger.metadata.algorithm = "hst";
  HstState state(hst);
  std::unordered_map<std::string, ClientHandle> live;
  const int nf = hst.num_facilities();
  for (size_t k = 0; k < events.size(); ++k) {
    const Event& e = events[k];
    const auto start = std::chrono::steady_clock::now();
    StepRecord rec;
    rec.t = static_cast<std::int64_t>(k) + 1;
    if (e.kind == EventKind::kArrive) {
      FacilityId at = kNoFacility;
      if (e.nearest) {
        at = *e.nearest;
      } else {
        if (static_cast<int>(e.dist.size()) != nf) {
          throw Error("arrival of '" + e.client + "' has wrong vector length");
        }
        for (FacilityId i = 0; i < nf; ++i) {
          if (at == kNoFacility || e.dist[i] < e.dist[at]) at = i;
        }
      }
      if (at < 0 || at >= nf) {
        throw Error("arrival of '" + e.client + "' names unknown facility");
      }
      if (live.contains(e.client)) {
        throw Error("client '" + e.client + "' arrived twice");
      }
      live.emplace(e.client, state.Insert(at).client);
      rec.event = "arrive";
    } else {
      const auto it = live.find(e.client);
      if (it == live.end()) {
        throw Error("depart of unknown client '" + e.client + "'");
      }
      state.Delete(it->second);
      live.erase(it);
      rec.event = "depart";
    }
    rec.stage = 1;
    rec.cost = state.cost();
    rec.grand_total = rec.cost;
    rec.client_recourse_cum = state.reconnections();
    rec.facility_recourse_cum = state.status_changes();
    rec.lb_certificate = state.LowerBoundCertificate();
    rec.marked_count = state.marked_count();
    rec.open_count = state.open_count();
    rec.wall_us = std::chrono::duration<double, std::micro>(
                      std::chrono::steady_clock::now() - start)
                      .count();
    const bool verify =
        options.verify_every > 0 &&
        (rec.t % options.verify_every == 0 || k + 1 == events.size());
    if (verify) {
      for (const std::string& v : state.CheckAll()) {
        run.violations.push_back("t=" + std::to_string(rec.t) + " " + v);
      }
      if (rec.cost > 12.0 * *rec.lb_certificate + 1e-6) {
        run.violations.push_back("t=" + std::to_string(rec.t) +
                                 " cost exceeds 12 x lower-bound certificate");
      }
    }
    run.ledger.records.push_back(std::move(rec));
  }
  run.reconnections = state.reconnections();
  run.events = static_cast<std::int64_t>(events.size());
  return run;
}

}  // namespace dynfl
