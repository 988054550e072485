#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "streamcd/graph.hpp"
#include "streamcd/partition.hpp"
#include "streamcd/types.hpp"

namespace streamcd {

/// Classification of an arriving edge by endpoint novelty and community
/// equality, decided before the edge is inserted.
enum class EdgeType : std::uint8_t {
  InnerCommunity,  // both endpoints exist, same community
  CrossCommunity,  // both endpoints exist, different communities
  HalfNew,         // exactly one endpoint exists
  New,             // neither endpoint exists
};

/// What was done to the community structure for one edge.
enum class StreamOp : std::uint8_t {
  Keep,              // structure unchanged
  Merge,             // endpoint communities combined
  AssignToExisting,  // new node joined the existing endpoint's community
  CreateNew,         // fresh two-member community
};

/// How cross-community merge decisions are made.
///
/// PaperFaithful compares the two candidate outcomes with a closed form that
/// ignores any cross weight already present between the two communities; the
/// decision stays O(1) per edge. Exact adds that cross weight (found by
/// scanning the smaller community) so the decision always agrees with a
/// from-scratch modularity comparison, at O(S) decision cost. Bookkeeping
/// after a merge is exact in both modes.
enum class DecisionMode : std::uint8_t { PaperFaithful, Exact };

const char* to_string(EdgeType t);
const char* to_string(StreamOp o);

/// Merge test for a cross-community edge of weight w, given the total graph
/// weight and both communities' sigma_tot as they were before the edge was
/// inserted: merge iff
///   w * (2*m_before + 2w) > 2 * (sigma_tot_i + w) * (sigma_tot_j + w).
bool should_merge(Weight m_before, Weight w, Weight sigma_tot_i, Weight sigma_tot_j);

/// Record of one processed event.
struct AppliedOp {
  EdgeEvent edge;
  EdgeType edge_type = EdgeType::New;
  StreamOp operation = StreamOp::CreateNew;
  /// Modularity deltas of the candidate outcomes relative to the state
  /// before the edge, when a closed form exists:
  ///  - InnerCommunity: dq_keep (the only outcome; m grows, so Q moves);
  ///  - CrossCommunity: dq_keep and dq_alt = merge;
  ///  - HalfNew: dq_keep = assign to the existing community, dq_alt =
  ///    create a singleton community instead;
  ///  - New: dq_alt = create (there is no canonical existing target).
  std::optional<double> dq_keep;
  std::optional<double> dq_alt;
  std::vector<CommunityId> touched;
};

/// Operation and edge-type tallies over all processed events.
struct OpStats {
  std::array<std::size_t, 4> by_op{};    // indexed by StreamOp
  std::array<std::size_t, 4> by_type{};  // indexed by EdgeType
  std::size_t total = 0;

  std::size_t count(StreamOp o) const { return by_op[static_cast<std::size_t>(o)]; }
  std::size_t count(EdgeType t) const { return by_type[static_cast<std::size_t>(t)]; }
  double percentage(StreamOp o) const {
    return total == 0 ? 0.0 : 100.0 * static_cast<double>(count(o)) / static_cast<double>(total);
  }
  double percentage(EdgeType t) const {
    return total == 0 ? 0.0 : 100.0 * static_cast<double>(count(t)) / static_cast<double>(total);
  }
};

/// Candidate gains for a cross-community edge (pre-insertion baseline).
struct CrossEdgeGains {
  double keep = 0.0;
  double merge = 0.0;
};

/// Applies a stream of edge events to a graph + partition pair, keeping the
/// community sums exact after every event. Events are strictly sequential;
/// the order of the stream is semantically significant.
class Tracker {
 public:
  Tracker(Graph graph, Partition partition, DecisionMode mode = DecisionMode::PaperFaithful);

  /// Type of the event under the current state; the edge is not inserted.
  EdgeType classify(const EdgeEvent& e) const;

  /// Modularity deltas of keeping versus merging for a cross-community
  /// event, under the tracker's decision mode, measured against the
  /// pre-insertion state.
  CrossEdgeGains cross_edge_gains(const EdgeEvent& e) const;

  /// Inserts the edge and updates the partition per the edge type. Throws
  /// NonPositiveWeight / SelfLoopRejected on bad events.
  AppliedOp apply_edge(const EdgeEvent& e);

  /// Tallies so far. Throws NoEventsProcessed before the first event.
  OpStats stats() const;

  const Graph& graph() const noexcept { return graph_; }
  const Partition& partition() const noexcept { return partition_; }
  DecisionMode mode() const noexcept { return mode_; }
  std::size_t events_processed() const noexcept { return stats_.total; }

  /// Modularity of the tracked state, from the running sums.
  double tracked_modularity() const { return modularity(graph_, partition_); }

  /// When set, one journal line is written per applied event.
  void set_journal(std::ostream* sink) noexcept { journal_ = sink; }

 private:
  double modularity_after_sigma_change(Weight w, double d_sigma_in, double d_sigma_sq) const;

  Graph graph_;
  Partition partition_;
  DecisionMode mode_;
  OpStats stats_{};
  std::ostream* journal_ = nullptr;
};

/// Journal line: "<edge_type>\t<operation>\t<dq_keep>\t<dq_alt>", with "-"
/// for absent deltas.
void write_journal_line(std::ostream& out, const AppliedOp& op);

struct JournalEntry {
  EdgeType edge_type;
  StreamOp operation;
  std::optional<double> dq_keep;
  std::optional<double> dq_alt;
};

/// Parses journal lines (blank lines and '#' comments skipped). Throws
/// MalformedLine on anything else.
std::vector<JournalEntry> read_journal(std::istream& in);

/// Tallies a parsed journal. Throws NoEventsProcessed when empty.
OpStats stats_from_journal(const std::vector<JournalEntry>& entries);

}  // namespace streamcd
