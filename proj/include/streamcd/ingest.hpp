#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "streamcd/types.hpp"

namespace streamcd {

struct ParseResult {
  std::vector<EdgeEvent> events;
  std::size_t self_loops_dropped = 0;
};

/// Parses SNAP-style edge-list text: '#' comment lines, whitespace-separated
/// non-negative integer ids, optional positive weight column (absent ->
/// default_weight). Self-loop lines are dropped and counted. Throws
/// MalformedLine with the offending line number, EmptyInput when no events
/// survive.
ParseResult parse_edge_list(std::istream& in, Weight default_weight = 1.0);

/// Canonical single line per event: "source<TAB>target<TAB>weight".
void write_edge_list(std::ostream& out, const std::vector<EdgeEvent>& events);

struct SymmetrizeResult {
  std::vector<EdgeEvent> events;
  std::size_t merged = 0;  // inputs folded into an earlier occurrence
};

/// Collapses direction and multiplicity: one event per unordered pair, at
/// the first occurrence's position, oriented min-id first. By default the
/// first weight is kept (a repeated or reversed record is one observation of
/// the same tie); with sum_weights the weights accumulate instead.
SymmetrizeResult symmetrize(const std::vector<EdgeEvent>& events, bool sum_weights = false);

/// A reproducible experiment input: the initial portion and the incremental
/// subsets, produced by one seeded permutation of the cleaned events.
struct StreamPlan {
  std::vector<EdgeEvent> initial;
  std::vector<std::vector<EdgeEvent>> subsets;
  std::uint64_t seed = 0;
  double ratio = 0.5;
  std::size_t subset_count = 10;
};

/// Shuffles the events with a seeded permutation; the first ceil(ratio * N)
/// become the initial portion and the rest is cut into subset_count
/// contiguous blocks whose sizes differ by at most one. Same seed, same
/// plan. Throws TooFewEdges when there are fewer events than
/// subset_count + 1.
StreamPlan split_stream(std::vector<EdgeEvent> events, double ratio, std::size_t subset_count,
                        std::uint64_t seed);

/// Plan serialization: a header line recording seed/ratio/subset_count, then
/// one three-column event line each, with section markers between the
/// initial portion and the subsets.
void write_stream_plan(std::ostream& out, const StreamPlan& plan);
StreamPlan read_stream_plan(std::istream& in);

}  // namespace streamcd
