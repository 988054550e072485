#include "streamcd/partition.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

#include "streamcd/errors.hpp"

namespace streamcd {

void Partition::ensure_size(const Graph& g) const {
  if (assignment_.size() < g.node_count()) {
    assignment_.resize(g.node_count(), kUnassigned);
    member_pos_.resize(g.node_count(), 0);
  }
}

Partition::Community& Partition::community_ref(CommunityId c) {
  auto it = communities_.find(c);
  if (it == communities_.end()) {
    throw UnknownCommunity("unknown community " + std::to_string(c));
  }
  return it->second;
}

const Partition::Community& Partition::community_ref(CommunityId c) const {
  auto it = communities_.find(c);
  if (it == communities_.end()) {
    throw UnknownCommunity("unknown community " + std::to_string(c));
  }
  return it->second;
}

void Partition::bump_sigma(Community& com, Weight d_in, Weight d_tot) {
  sigma_in_total_ += d_in;
  sigma_tot_sq_total_ -= com.sigma_tot * com.sigma_tot;
  com.sigma_in += d_in;
  com.sigma_tot += d_tot;
  sigma_tot_sq_total_ += com.sigma_tot * com.sigma_tot;
}

void Partition::retire_if_empty(CommunityId c) {
  auto it = communities_.find(c);
  if (it != communities_.end() && it->second.members.empty()) {
    sigma_in_total_ -= it->second.sigma_in;
    sigma_tot_sq_total_ -= it->second.sigma_tot * it->second.sigma_tot;
    communities_.erase(it);
  }
}

void Partition::attach_member(const Graph& g, Graph::Index iu, CommunityId c, Community& com) {
  assignment_[iu] = c;
  member_pos_[iu] = static_cast<std::uint32_t>(com.members.size());
  com.members.push_back(iu);
  ++assigned_count_;
  (void)g;
}

void Partition::detach_member(const Graph& g, Graph::Index iu, CommunityId c, Community& com) {
  // swap-remove so membership updates stay O(1)
  const std::uint32_t pos = member_pos_[iu];
  const Graph::Index last = com.members.back();
  com.members[pos] = last;
  member_pos_[last] = pos;
  com.members.pop_back();
  assignment_[iu] = kUnassigned;
  --assigned_count_;
  (void)g;
  (void)c;
}

Weight Partition::weight_into(const Graph& g, Graph::Index iu, CommunityId c) const {
  Weight k_in = 0.0;
  for (const auto& [iv, w] : g.adjacent(iu)) {
    if (iv == iu) continue;
    if (assignment_[iv] == c) k_in += w;
  }
  return k_in;
}

Partition Partition::singletons(const Graph& g) {
  Partition p;
  p.ensure_size(g);
  for (Graph::Index i = 0; i < g.node_count(); ++i) {
    const CommunityId c = p.fresh_id();
    Community com;
    com.sigma_tot = g.degree_at(i);
    com.sigma_in = 2.0 * g.self_loop_at(i);
    com.members.push_back(i);
    p.assignment_[i] = c;
    p.member_pos_[i] = 0;
    p.sigma_in_total_ += com.sigma_in;
    p.sigma_tot_sq_total_ += com.sigma_tot * com.sigma_tot;
    p.communities_.emplace(c, std::move(com));
  }
  p.assigned_count_ = g.node_count();
  return p;
}

Partition Partition::from_assignment(const Graph& g,
                                     const std::unordered_map<NodeId, CommunityId>& labels) {
  Partition p;
  p.ensure_size(g);

  // renumber labels to fresh ids, deterministically (ascending label order)
  std::map<CommunityId, CommunityId> relabel;
  for (const auto& [node, label] : labels) {
    (void)node;
    relabel.emplace(label, 0);
  }
  for (auto& [label, fresh] : relabel) {
    fresh = p.fresh_id();
    p.communities_.emplace(fresh, Community{});
  }

  for (const auto& [node, label] : labels) {
    const Graph::Index iu = g.index_of(node);
    const CommunityId c = relabel.at(label);
    Community& com = p.communities_.at(c);
    p.assignment_[iu] = c;
    p.member_pos_[iu] = static_cast<std::uint32_t>(com.members.size());
    com.members.push_back(iu);
    ++p.assigned_count_;
  }

  // sums from scratch over the adjacency
  for (auto& [c, com] : p.communities_) {
    for (const Graph::Index iu : com.members) {
      com.sigma_tot += g.degree_at(iu);
      com.sigma_in += 2.0 * g.self_loop_at(iu);
      for (const auto& [iv, w] : g.adjacent(iu)) {
        if (iv != iu && p.assignment_[iv] == c) com.sigma_in += w;
      }
    }
    p.sigma_in_total_ += com.sigma_in;
    p.sigma_tot_sq_total_ += com.sigma_tot * com.sigma_tot;
  }
  return p;
}

bool Partition::is_assigned(const Graph& g, NodeId u) const {
  ensure_size(g);
  const Graph::Index iu = g.index_of(u);
  return assignment_[iu] != kUnassigned;
}

CommunityId Partition::community_of(const Graph& g, NodeId u) const {
  ensure_size(g);
  const CommunityId c = assignment_[g.index_of(u)];
  if (c == kUnassigned) {
    throw UnassignedNode("node " + std::to_string(u) + " has no community");
  }
  return c;
}

std::optional<CommunityId> Partition::try_community_of(const Graph& g, NodeId u) const {
  ensure_size(g);
  if (!g.contains_node(u)) return std::nullopt;
  const CommunityId c = assignment_[g.index_of(u)];
  if (c == kUnassigned) return std::nullopt;
  return c;
}

bool Partition::has_community(CommunityId c) const noexcept { return communities_.contains(c); }

Weight Partition::sigma_in(CommunityId c) const { return community_ref(c).sigma_in; }

Weight Partition::sigma_tot(CommunityId c) const { return community_ref(c).sigma_tot; }

std::size_t Partition::member_count(CommunityId c) const { return community_ref(c).members.size(); }

std::vector<NodeId> Partition::members(const Graph& g, CommunityId c) const {
  const Community& com = community_ref(c);
  std::vector<NodeId> out;
  out.reserve(com.members.size());
  for (const Graph::Index i : com.members) out.push_back(g.node_at(i));
  return out;
}

std::vector<CommunityId> Partition::community_ids() const {
  std::vector<CommunityId> ids;
  ids.reserve(communities_.size());
  for (const auto& [c, com] : communities_) ids.push_back(c);
  std::sort(ids.begin(), ids.end());
  return ids;
}

void Partition::assign_new_node(const Graph& g, NodeId u, CommunityId c) {
  ensure_size(g);
  const Graph::Index iu = g.index_of(u);
  if (assignment_[iu] != kUnassigned) {
    throw AlreadyAssigned("node " + std::to_string(u) + " is already assigned");
  }
  Community& com = community_ref(c);
  const Weight k_in = weight_into(g, iu, c);
  attach_member(g, iu, c, com);
  bump_sigma(com, 2.0 * k_in + 2.0 * g.self_loop_at(iu), g.degree_at(iu));
}

CommunityId Partition::create_community(const Graph& g, std::span<const NodeId> seeds) {
  ensure_size(g);
  for (const NodeId u : seeds) {
    if (assignment_[g.index_of(u)] != kUnassigned) {
      throw AlreadyAssigned("seed node " + std::to_string(u) + " is already assigned");
    }
  }
  const CommunityId c = fresh_id();
  auto [it, ok] = communities_.emplace(c, Community{});
  Community& com = it->second;
  for (const NodeId u : seeds) {
    const Graph::Index iu = g.index_of(u);
    const Weight k_in = weight_into(g, iu, c);  // counts seeds attached so far
    attach_member(g, iu, c, com);
    bump_sigma(com, 2.0 * k_in + 2.0 * g.self_loop_at(iu), g.degree_at(iu));
  }
  return c;
}

void Partition::move_node(const Graph& g, NodeId u, CommunityId target) {
  ensure_size(g);
  const Graph::Index iu = g.index_of(u);
  const CommunityId source = assignment_[iu];
  if (source == kUnassigned) {
    throw UnassignedNode("node " + std::to_string(u) + " has no community");
  }
  Community& dst = community_ref(target);
  if (source == target) return;
  Community& src = community_ref(source);

  const Weight self = 2.0 * g.self_loop_at(iu);
  const Weight k = g.degree_at(iu);

  detach_member(g, iu, source, src);
  bump_sigma(src, -(2.0 * weight_into(g, iu, source) + self), -k);
  retire_if_empty(source);

  const Weight k_in_dst = weight_into(g, iu, target);
  attach_member(g, iu, target, dst);
  bump_sigma(dst, 2.0 * k_in_dst + self, k);
}

CommunityId Partition::merge_communities(const Graph& g, CommunityId a, CommunityId b) {
  ensure_size(g);
  if (a == b) throw SelfMerge("cannot merge community " + std::to_string(a) + " with itself");
  Community& ca = community_ref(a);
  Community& cb = community_ref(b);

  const bool a_survives =
      ca.members.size() != cb.members.size() ? ca.members.size() > cb.members.size() : a < b;
  const CommunityId survivor = a_survives ? a : b;
  const CommunityId absorbed = a_survives ? b : a;
  Community& keep = a_survives ? ca : cb;
  Community& gone = a_survives ? cb : ca;

  // exact cross weight, found by scanning only the smaller side
  Weight cross = 0.0;
  for (const Graph::Index iu : gone.members) {
    for (const auto& [iv, w] : g.adjacent(iu)) {
      if (iv != iu && assignment_[iv] == survivor) cross += w;
    }
  }

  const Weight gone_in = gone.sigma_in;
  const Weight gone_tot = gone.sigma_tot;
  for (const Graph::Index iu : gone.members) {
    assignment_[iu] = survivor;
    member_pos_[iu] = static_cast<std::uint32_t>(keep.members.size());
    keep.members.push_back(iu);
  }
  gone.members.clear();
  bump_sigma(gone, -gone_in, -gone_tot);
  retire_if_empty(absorbed);
  bump_sigma(keep, gone_in + 2.0 * cross, gone_tot);
  return survivor;
}

Weight Partition::cross_weight(const Graph& g, CommunityId a, CommunityId b) const {
  ensure_size(g);
  const Community& ca = community_ref(a);
  const Community& cb = community_ref(b);
  const Community& small = ca.members.size() <= cb.members.size() ? ca : cb;
  const CommunityId other = ca.members.size() <= cb.members.size() ? b : a;
  Weight cross = 0.0;
  for (const Graph::Index iu : small.members) {
    for (const auto& [iv, w] : g.adjacent(iu)) {
      if (iv != iu && assignment_[iv] == other) cross += w;
    }
  }
  return cross;
}

void Partition::record_edge_insertion(const Graph& g, NodeId u, NodeId v, Weight w) {
  ensure_size(g);
  const CommunityId cu = assignment_[g.index_of(u)];
  const CommunityId cv = assignment_[g.index_of(v)];
  if (cu != kUnassigned && cu == cv) {
    bump_sigma(community_ref(cu), 2.0 * w, 2.0 * w);
    return;
  }
  if (cu != kUnassigned) bump_sigma(community_ref(cu), 0.0, w);
  if (cv != kUnassigned) bump_sigma(community_ref(cv), 0.0, w);
}

double Partition::gain_insert(const Graph& g, NodeId u, CommunityId c) const {
  ensure_size(g);
  const Graph::Index iu = g.index_of(u);
  const Community& com = community_ref(c);
  // a node still sitting in c is treated as removed, so that
  // gain_remove(u) + gain_insert(u, same community) cancels exactly
  const Weight k = g.degree_at(iu);
  const Weight tot = assignment_[iu] == c ? com.sigma_tot - k : com.sigma_tot;
  return insertion_gain(weight_into(g, iu, c), k, tot, g.total_weight());
}

double Partition::gain_remove(const Graph& g, NodeId u) const {
  ensure_size(g);
  const Graph::Index iu = g.index_of(u);
  const CommunityId c = assignment_[iu];
  if (c == kUnassigned) {
    throw UnassignedNode("node " + std::to_string(u) + " has no community");
  }
  const Weight k = g.degree_at(iu);
  return -insertion_gain(weight_into(g, iu, c), k, community_ref(c).sigma_tot - k,
                         g.total_weight());
}

namespace {

void require_fully_assigned(const Graph& g, const Partition& p) {
  if (p.assigned_count() != g.node_count()) {
    throw UnassignedNode("partition covers " + std::to_string(p.assigned_count()) + " of " +
                         std::to_string(g.node_count()) + " nodes");
  }
}

}  // namespace

double modularity(const Graph& g, const Partition& p) {
  require_fully_assigned(g, p);
  const double two_m = 2.0 * g.total_weight();
  if (two_m == 0.0) return 0.0;
  return (p.sigma_in_total() - p.sigma_tot_sq_total() / two_m) / two_m;
}

double modularity_from_fractions(const Graph& g, const Partition& p) {
  require_fully_assigned(g, p);
  const double two_m = 2.0 * g.total_weight();
  if (two_m == 0.0) return 0.0;

  // e_cc: fraction of ordered-pair edge weight inside c; a_c: fraction of
  // degree attached to c. Both recomputed from the adjacency alone.
  std::unordered_map<CommunityId, double> internal;
  std::unordered_map<CommunityId, double> attached;
  for (Graph::Index i = 0; i < g.node_count(); ++i) {
    const CommunityId ci = p.community_of(g, g.node_at(i));
    attached[ci] += g.degree_at(i);
    for (const auto& [j, w] : g.adjacent(i)) {
      if (j == i) {
        internal[ci] += 2.0 * w;
      } else if (p.community_of(g, g.node_at(j)) == ci) {
        internal[ci] += w;  // each internal edge visited from both ends
      }
    }
  }
  double q = 0.0;
  for (const auto& [c, a] : attached) {
    const auto it = internal.find(c);
    const double e_cc = (it == internal.end() ? 0.0 : it->second) / two_m;
    const double a_c = a / two_m;
    q += e_cc - a_c * a_c;
  }
  return q;
}

double modularity_pairwise(const Graph& g, const Partition& p) {
  require_fully_assigned(g, p);
  const double two_m = 2.0 * g.total_weight();
  if (two_m == 0.0) return 0.0;

  double q = 0.0;
  for (const CommunityId c : p.community_ids()) {
    std::vector<Graph::Index> idx;
    for (const NodeId u : p.members(g, c)) idx.push_back(g.index_of(u));
    for (const Graph::Index i : idx) {
      for (const Graph::Index j : idx) {
        double a_ij = 0.0;
        const auto it = g.adjacent(i).find(j);
        if (it != g.adjacent(i).end()) a_ij = (i == j) ? 2.0 * it->second : it->second;
        q += a_ij - g.degree_at(i) * g.degree_at(j) / two_m;
      }
    }
  }
  return q / two_m;
}

void write_partition(std::ostream& out, const Graph& g, const Partition& p) {
  std::vector<NodeId> nodes;
  nodes.reserve(g.node_count());
  for (Graph::Index i = 0; i < g.node_count(); ++i) nodes.push_back(g.node_at(i));
  std::sort(nodes.begin(), nodes.end());
  for (const NodeId u : nodes) {
    out << u << '\t' << p.community_of(g, u) << '\n';
  }
}

Partition load_partition(std::istream& in, const Graph& g) {
  std::unordered_map<NodeId, CommunityId> labels;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    NodeId node = 0;
    CommunityId community = 0;
    if (!(fields >> node >> community)) {
      throw MalformedLine(line_no, "expected \"node<TAB>community\"");
    }
    if (!g.contains_node(node)) {
      throw UnknownNodeInPartitionFile("partition file line " + std::to_string(line_no) +
                                       " names node " + std::to_string(node) +
                                       " absent from the graph");
    }
    labels[node] = community;
  }
  Partition p = Partition::from_assignment(g, labels);
  if (p.assigned_count() != g.node_count()) {
    throw UnassignedNode("partition file covers " + std::to_string(p.assigned_count()) + " of " +
                         std::to_string(g.node_count()) + " graph nodes");
  }
  return p;
}

}  // namespace streamcd
