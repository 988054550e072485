#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "streamcd/graph.hpp"
#include "streamcd/types.hpp"

namespace streamcd {

/// Community assignment over a graph, with incrementally maintained
/// per-community sums:
///
///   sigma_in[c]:  ordered-pair internal weight, twice the single-count
///                 weight of edges inside c plus twice the self-loop
///                 weight of members (so expressions of the form
///                 sigma_in + 2*k_in need no extra factors);
///   sigma_tot[c]: sum of weighted degrees of members; over all
///                 communities this equals 2m.
///
/// A partition is bound to the graph it was built against; after inserting
/// an edge into the graph, call record_edge_insertion to keep the sums in
/// step. Community ids of emptied communities are retired and never reused.
///
/// Same single-writer discipline as Graph: concurrent reads between
/// mutations are fine, concurrent mutation is not.
class Partition {
 public:
  static constexpr CommunityId kUnassigned = std::numeric_limits<CommunityId>::max();

  Partition() = default;

  /// Every node in its own fresh community.
  static Partition singletons(const Graph& g);

  /// Builds a partition from node -> label; nodes absent from the map stay
  /// unassigned. Labels are renumbered to fresh ids (ascending label order)
  /// and all sums are computed from the graph.
  static Partition from_assignment(const Graph& g,
                                   const std::unordered_map<NodeId, CommunityId>& labels);

  bool is_assigned(const Graph& g, NodeId u) const;
  CommunityId community_of(const Graph& g, NodeId u) const;  // throws UnassignedNode
  std::optional<CommunityId> try_community_of(const Graph& g, NodeId u) const;

  /// Community of the node at dense index i, or kUnassigned. For algorithm
  /// kernels that already hold indices; the partition must have been sized
  /// against the graph (any accessor taking the graph does that).
  CommunityId community_at(Graph::Index i) const {
    return i < assignment_.size() ? assignment_[i] : kUnassigned;
  }

  bool has_community(CommunityId c) const noexcept;
  Weight sigma_in(CommunityId c) const;        // throws UnknownCommunity
  Weight sigma_tot(CommunityId c) const;       // throws UnknownCommunity
  std::size_t member_count(CommunityId c) const;
  std::vector<NodeId> members(const Graph& g, CommunityId c) const;

  std::size_t community_count() const noexcept { return communities_.size(); }
  std::size_t assigned_count() const noexcept { return assigned_count_; }
  std::vector<CommunityId> community_ids() const;  // ascending

  /// Assigns a so-far-unassigned node to an existing community, folding its
  /// edges into the sums. Throws AlreadyAssigned / UnknownCommunity.
  void assign_new_node(const Graph& g, NodeId u, CommunityId c);

  /// Creates a fresh community from unassigned seed nodes and returns its id.
  CommunityId create_community(const Graph& g, std::span<const NodeId> seeds);

  /// Moves an assigned node to another community, updating both sides'
  /// sums incrementally; the source community is retired when emptied.
  void move_node(const Graph& g, NodeId u, CommunityId target);

  /// Combines two communities. The survivor is the larger one (ties: smaller
  /// id); members of the smaller side are relabelled by scanning only that
  /// side, so the cost is O(S * avg_degree) in the smaller size S.
  /// sigma_in of the survivor gains the exact cross weight between the two
  /// sides. Returns the surviving id. Throws SelfMerge / UnknownCommunity.
  CommunityId merge_communities(const Graph& g, CommunityId a, CommunityId b);

  /// Folds one just-inserted graph edge {u, v, w} into the sums: same
  /// community -> sigma_in += 2w and sigma_tot += 2w; otherwise each
  /// assigned endpoint's community gets sigma_tot += w. Call after the
  /// graph mutation.
  void record_edge_insertion(const Graph& g, NodeId u, NodeId v, Weight w);

  /// Total single-count weight of edges running between communities a and
  /// b, found by scanning the smaller side. Throws UnknownCommunity.
  Weight cross_weight(const Graph& g, CommunityId a, CommunityId b) const;

  /// Modularity gain of inserting node u, treated as isolated, into c:
  ///   (2*k_in - sigma_tot[c]*k_u/m) / 2m.
  /// A node currently inside c counts as removed (its degree is excluded
  /// from sigma_tot), so remove/insert pairs against the same community
  /// cancel exactly.
  double gain_insert(const Graph& g, NodeId u, CommunityId c) const;

  /// Gain of removing u from its community: the negative of gain_insert
  /// against its own community with u's degree excluded from sigma_tot.
  /// gain_remove(u) + gain_insert(u, same community) == 0.
  double gain_remove(const Graph& g, NodeId u) const;

  // Running aggregates: sum of sigma_in and sum of squared sigma_tot over
  // all communities. Make whole-partition modularity O(1).
  double sigma_in_total() const noexcept { return sigma_in_total_; }
  double sigma_tot_sq_total() const noexcept { return sigma_tot_sq_total_; }

 private:
  struct Community {
    Weight sigma_in = 0.0;
    Weight sigma_tot = 0.0;
    std::vector<Graph::Index> members;
  };

  void ensure_size(const Graph& g) const;
  Community& community_ref(CommunityId c);
  const Community& community_ref(CommunityId c) const;
  CommunityId fresh_id() { return next_id_++; }
  void bump_sigma(Community& com, Weight d_in, Weight d_tot);
  void retire_if_empty(CommunityId c);
  void attach_member(const Graph& g, Graph::Index iu, CommunityId c, Community& com);
  void detach_member(const Graph& g, Graph::Index iu, CommunityId c, Community& com);
  // Sum of weights from node iu to members of c, excluding iu itself.
  Weight weight_into(const Graph& g, Graph::Index iu, CommunityId c) const;

  // node dense index -> community (kUnassigned sentinel); grown lazily.
  mutable std::vector<CommunityId> assignment_;
  mutable std::vector<std::uint32_t> member_pos_;  // position inside members vector
  std::unordered_map<CommunityId, Community> communities_;
  CommunityId next_id_ = 0;
  std::size_t assigned_count_ = 0;
  double sigma_in_total_ = 0.0;
  double sigma_tot_sq_total_ = 0.0;
};

/// Gain of attaching an isolated node (degree k, of which k_in reaches the
/// target community) to a community with the given sigma_tot, in a graph of
/// total weight m.
inline double insertion_gain(Weight k_in, Weight k, Weight sigma_tot, Weight m) {
  return (2.0 * k_in - sigma_tot * k / m) / (2.0 * m);
}

/// Modularity from the maintained community sums:
///   Q = (1/2m) * sum_c (sigma_in[c] - sigma_tot[c]^2 / 2m).
/// O(1). Throws UnassignedNode unless every graph node is assigned.
double modularity(const Graph& g, const Partition& p);

/// Modularity recomputed from scratch by scanning the graph: per-community
/// internal edge fractions e_cc and degree fractions a_c, Q = sum e_cc - a_c^2.
/// Independent of the partition's maintained sums; used at checkpoints.
double modularity_from_fractions(const Graph& g, const Partition& p);

/// Literal definition: (1/2m) * sum over same-community node pairs (i, j) of
/// A_ij - k_i*k_j/2m, diagonal included (A_uu is twice the self-loop weight).
/// O(sum of squared community sizes); reference path for small graphs.
double modularity_pairwise(const Graph& g, const Partition& p);

/// Text export, one "node_id<TAB>community_id" line, sorted by node id.
void write_partition(std::ostream& out, const Graph& g, const Partition& p);

/// Reads a write_partition-style file and binds it to g. Every line's node
/// must exist in g (UnknownNodeInPartitionFile) and every node of g must be
/// covered (UnassignedNode).
Partition load_partition(std::istream& in, const Graph& g);

}  // namespace streamcd
