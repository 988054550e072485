#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "streamcd/incremental.hpp"
#include "streamcd/ingest.hpp"
#include "streamcd/types.hpp"

namespace streamcd {

struct ExperimentConfig {
  double ratio = 0.5;
  std::size_t subsets = 10;
  std::uint64_t seed = 0;
  DecisionMode mode = DecisionMode::PaperFaithful;
  double louvain_threshold = 1e-6;
  /// Re-run the static detector cold on the aggregate graph at every subset
  /// boundary, for the comparison column.
  bool with_static_rerun = false;
  /// Skip stream events whose node pair already has an edge instead of
  /// accumulating their weight.
  bool ignore_duplicate_events = false;
};

struct CheckpointRow {
  std::size_t subset_index = 0;  // 0 is the initial state
  std::size_t edges_so_far = 0;  // events applied, initial portion included
  double q_incremental = 0.0;    // recomputed from scratch, never the running value
  std::optional<double> q_static_rerun;
  double elapsed_incremental_s = 0.0;  // cumulative stream-application time only
  std::optional<double> elapsed_static_s;
};

struct ExperimentReport {
  std::vector<CheckpointRow> rows;
  OpStats op_stats;
  ExperimentConfig config;
  std::size_t initial_edges = 0;
  std::size_t duplicate_events_skipped = 0;
  double initial_q = 0.0;
  int initial_passes = 0;
};

/// Runs the full protocol on cleaned events: seeded split, static detection
/// on the initial portion, then every remaining event through the tracker
/// with a checkpoint per subset. Checkpoint modularity is recomputed from
/// the graph, so reported quality cannot hide bookkeeping drift; stream
/// timing excludes that recomputation. Throws TooFewEdges et al.
ExperimentReport run_experiment(const std::vector<EdgeEvent>& events,
                                const ExperimentConfig& config,
                                std::ostream* journal = nullptr);

/// CSV with a versioned header comment; identical input, seed and mode give
/// byte-identical output apart from the elapsed-time columns.
void write_report_csv(std::ostream& out, const ExperimentReport& report);

const char* to_string(DecisionMode mode);

}  // namespace streamcd
