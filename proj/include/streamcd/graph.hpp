#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "streamcd/types.hpp"

namespace streamcd {

/// Mutable weighted undirected graph with weight-accumulating edge insertion
/// and running degree / total-weight bookkeeping.
///
/// Conventions:
///  - parallel edges are merged by summing weights;
///  - a self-loop of weight w contributes 2w to its node's weighted degree
///    and w to the total weight m, so that sum_u k_u == 2m holds exactly;
///  - external node ids are arbitrary non-negative integers and are interned
///    to dense indices in insertion order.
///
/// Single-writer: concurrent reads are fine between mutations, concurrent
/// mutation is not supported.
class Graph {
 public:
  using Index = std::uint32_t;

  enum class EdgeOutcome { Created, Incremented };

  Graph() = default;

  /// Adds w to the weight of edge {u, v}, creating it if absent. Updates
  /// k_u, k_v and m. Returns Created iff the edge did not exist before.
  /// Throws NonPositiveWeight if w <= 0 and SelfLoopRejected if u == v
  /// (self-loops only enter through add_self_loop, used when contracting
  /// communities to single nodes).
  EdgeOutcome add_or_increment_edge(NodeId u, NodeId v, Weight w);

  /// Adds w to the self-loop weight of u: k_u += 2w, m += w.
  void add_self_loop(NodeId u, Weight w);

  /// Registers u with no incident edges (no-op if already present).
  void ensure_node(NodeId u);

  bool contains_node(NodeId u) const noexcept;

  /// Weighted degree k_u; self-loops count twice. Throws UnknownNode.
  Weight weighted_degree(NodeId u) const;

  /// Every stored incident edge exactly once (a self-loop appears once,
  /// with its stored weight). Order unspecified. Throws UnknownNode.
  std::vector<std::pair<NodeId, Weight>> neighbors(NodeId u) const;

  std::optional<Weight> edge_weight(NodeId u, NodeId v) const noexcept;

  /// m: single-count total edge weight; always half the degree sum.
  Weight total_weight() const noexcept { return total_weight_; }

  std::size_t node_count() const noexcept { return label_of_.size(); }

  /// Number of distinct unordered pairs with an edge (self-loops count one).
  std::size_t edge_count() const noexcept { return edge_count_; }

  // Dense-index access for algorithm kernels. Indices are stable for the
  // lifetime of the graph and enumerate nodes in insertion order.
  Index index_of(NodeId u) const;  // throws UnknownNode
  NodeId node_at(Index i) const { return label_of_[i]; }
  const std::unordered_map<Index, Weight>& adjacent(Index i) const { return adj_[i]; }
  Weight degree_at(Index i) const { return degree_[i]; }
  Weight self_loop_at(Index i) const;

 private:
  Index intern(NodeId u);

  std::unordered_map<NodeId, Index> index_of_;
  std::vector<NodeId> label_of_;
  std::vector<std::unordered_map<Index, Weight>> adj_;
  std::vector<Weight> degree_;  // k_i cache, kept equal to adjacency recomputation
  Weight total_weight_ = 0.0;
  std::size_t edge_count_ = 0;
};

}  // namespace streamcd
