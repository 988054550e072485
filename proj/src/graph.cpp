#include "streamcd/graph.hpp"

#include <cmath>
#include <string>

#include "streamcd/errors.hpp"

namespace streamcd {

namespace {

void check_weight(Weight w) {
  if (!(w > 0.0) || !std::isfinite(w)) {
    throw NonPositiveWeight("edge weight must be finite and > 0, got " + std::to_string(w));
  }
}

}  // namespace

Graph::Index Graph::intern(NodeId u) {
  auto [it, inserted] = index_of_.try_emplace(u, static_cast<Index>(label_of_.size()));
  if (inserted) {
    label_of_.push_back(u);
    adj_.emplace_back();
    degree_.push_back(0.0);
  }
  return it->second;
}

Graph::EdgeOutcome Graph::add_or_increment_edge(NodeId u, NodeId v, Weight w) {
  check_weight(w);
  if (u == v) {
    throw SelfLoopRejected("self-loop (" + std::to_string(u) + ") rejected on the edge stream");
  }
  const Index iu = intern(u);
  const Index iv = intern(v);

  auto [fwd, created] = adj_[iu].try_emplace(iv, 0.0);
  fwd->second += w;
  adj_[iv][iu] = fwd->second;  // keep adjacency symmetric

  degree_[iu] += w;
  degree_[iv] += w;
  total_weight_ += w;
  if (created) ++edge_count_;
  return created ? EdgeOutcome::Created : EdgeOutcome::Incremented;
}

void Graph::add_self_loop(NodeId u, Weight w) {
  check_weight(w);
  const Index iu = intern(u);
  auto [it, created] = adj_[iu].try_emplace(iu, 0.0);
  it->second += w;
  degree_[iu] += 2.0 * w;  // self-loop counts twice in the degree
  total_weight_ += w;
  if (created) ++edge_count_;
}

void Graph::ensure_node(NodeId u) { intern(u); }

bool Graph::contains_node(NodeId u) const noexcept { return index_of_.contains(u); }

Graph::Index Graph::index_of(NodeId u) const {
  auto it = index_of_.find(u);
  if (it == index_of_.end()) {
    throw UnknownNode("unknown node " + std::to_string(u));
  }
  return it->second;
}

Weight Graph::weighted_degree(NodeId u) const { return degree_[index_of(u)]; }

Weight Graph::self_loop_at(Index i) const {
  auto it = adj_[i].find(i);
  return it == adj_[i].end() ? 0.0 : it->second;
}

std::vector<std::pair<NodeId, Weight>> Graph::neighbors(NodeId u) const {
  const Index iu = index_of(u);
  std::vector<std::pair<NodeId, Weight>> out;
  out.reserve(adj_[iu].size());
  for (const auto& [iv, w] : adj_[iu]) {
    out.emplace_back(label_of_[iv], w);
  }
  return out;
}

std::optional<Weight> Graph::edge_weight(NodeId u, NodeId v) const noexcept {
  auto iu = index_of_.find(u);
  auto iv = index_of_.find(v);
  if (iu == index_of_.end() || iv == index_of_.end()) return std::nullopt;
  auto it = adj_[iu->second].find(iv->second);
  if (it == adj_[iu->second].end()) return std::nullopt;
  return it->second;
}

}  // namespace streamcd
