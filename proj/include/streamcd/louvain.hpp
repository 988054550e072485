#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <utility>

#include "streamcd/graph.hpp"
#include "streamcd/partition.hpp"

namespace streamcd::louvain {

struct Config {
  /// Stop iterating passes once a whole pass improves modularity by less
  /// than this.
  double gain_threshold = 1e-6;
  /// When set, nodes are visited in a seeded shuffled order; otherwise in
  /// insertion order. Fixed seed -> bit-identical output.
  std::optional<std::uint64_t> node_order_seed;
  /// Safety bound on the number of passes.
  int max_passes = 20;
};

/// Total map from fine node ids to the coarse node that absorbed them.
struct AggregationMap {
  std::unordered_map<NodeId, NodeId> fine_to_coarse;
};

struct PhaseResult {
  bool improved = false;
  double q_gain = 0.0;
};

/// One local-moving phase: sweeps all nodes, moving each to the neighboring
/// community with the largest strictly positive modularity gain, until a
/// full sweep makes no move. Mutates the partition in place.
PhaseResult local_move_phase(const Graph& g, Partition& p, const Config& config);

/// Contracts each community to a single node. Coarse edge weights sum the
/// fine cross weights; each coarse node carries a self-loop holding its
/// community's internal weight, so total weight and modularity of the
/// matching coarse partition are preserved.
std::pair<Graph, AggregationMap> aggregate(const Graph& g, const Partition& p);

struct Result {
  Partition partition;  // flat, over the original nodes
  double q = 0.0;
  int passes = 0;
};

/// Full two-phase algorithm: alternate local moving and aggregation until a
/// pass gains less than config.gain_threshold, no move occurs, or
/// config.max_passes is reached. Throws EmptyGraph on an empty input.
Result run(const Graph& g, const Config& config = {});

}  // namespace streamcd::louvain
