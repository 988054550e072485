#include "streamcd/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "streamcd/errors.hpp"
#include "streamcd/experiment.hpp"
#include "streamcd/graph.hpp"
#include "streamcd/incremental.hpp"
#include "streamcd/ingest.hpp"
#include "streamcd/louvain.hpp"
#include "streamcd/partition.hpp"

namespace streamcd::cli {

namespace {

struct CommonInput {
  std::string input;
  bool sum_duplicate_weights = false;
};

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open input file \"" + path + "\"");
  }
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open output file \"" + path + "\"");
  }
  return out;
}

// Dataset loading: parse, then collapse direction/multiplicity.
std::vector<EdgeEvent> load_dataset(const CommonInput& common) {
  std::ifstream in = open_input(common.input);
  ParseResult parsed = parse_edge_list(in);
  if (parsed.self_loops_dropped > 0) {
    std::cerr << "note: dropped " << parsed.self_loops_dropped << " self-loop line(s)\n";
  }
  SymmetrizeResult sym = symmetrize(parsed.events, common.sum_duplicate_weights);
  if (sym.merged > 0) {
    std::cerr << "note: " << (common.sum_duplicate_weights ? "summed" : "collapsed") << ' '
              << sym.merged << " duplicate/reverse record(s); " << sym.events.size()
              << " edges remain\n";
  }
  return sym.events;
}

Graph graph_from_events(const std::vector<EdgeEvent>& events) {
  Graph g;
  for (const EdgeEvent& e : events) {
    g.add_or_increment_edge(e.source, e.target, e.weight);
  }
  return g;
}

void print_op_stats(std::ostream& out, const OpStats& stats) {
  char line[128];
  out << "operation            count      percent\n";
  for (const StreamOp op : {StreamOp::Keep, StreamOp::Merge, StreamOp::AssignToExisting,
                            StreamOp::CreateNew}) {
    std::snprintf(line, sizeof(line), "%-20s %-10zu %.3f%%\n", to_string(op), stats.count(op),
                  stats.percentage(op));
    out << line;
  }
  out << "edge type            count      percent\n";
  for (const EdgeType t : {EdgeType::InnerCommunity, EdgeType::CrossCommunity, EdgeType::HalfNew,
                           EdgeType::New}) {
    std::snprintf(line, sizeof(line), "%-20s %-10zu %.3f%%\n", to_string(t), stats.count(t),
                  stats.percentage(t));
    out << line;
  }
  out << "total events         " << stats.total << '\n';
}

int cmd_detect(const CommonInput& common, std::uint64_t seed, bool seeded, double threshold,
               const std::string& out_path) {
  Graph g = graph_from_events(load_dataset(common));
  louvain::Config cfg;
  cfg.gain_threshold = threshold;
  if (seeded) cfg.node_order_seed = seed;
  louvain::Result result = louvain::run(g, cfg);

  std::ostringstream summary;
  summary << "q=" << result.q << " passes=" << result.passes
          << " communities=" << result.partition.community_count() << '\n';
  if (!out_path.empty()) {
    std::ofstream out = open_output(out_path);
    write_partition(out, g, result.partition);
    std::cout << summary.str();
  } else {
    write_partition(std::cout, g, result.partition);
    std::cerr << summary.str();
  }
  return 0;
}

int cmd_experiment(const CommonInput& common, ExperimentConfig config,
                   const std::string& journal_path, const std::string& out_path,
                   const std::string& plan_path) {
  std::vector<EdgeEvent> events = load_dataset(common);

  if (!plan_path.empty()) {
    // the runner derives the identical plan from the same seed
    const StreamPlan plan = split_stream(events, config.ratio, config.subsets, config.seed);
    std::ofstream plan_file = open_output(plan_path);
    write_stream_plan(plan_file, plan);
  }

  std::ofstream journal_file;
  std::ostream* journal = nullptr;
  if (!journal_path.empty()) {
    journal_file = open_output(journal_path);
    journal = &journal_file;
  }

  ExperimentReport report = run_experiment(events, config, journal);
  if (!out_path.empty()) {
    std::ofstream out = open_output(out_path);
    write_report_csv(out, report);
  } else {
    write_report_csv(std::cout, report);
  }
  std::cerr << "initial: " << report.initial_edges << " edges, q=" << report.initial_q
            << ", passes=" << report.initial_passes << '\n';
  print_op_stats(std::cerr, report.op_stats);
  return 0;
}

int cmd_track(const std::string& events_path, const std::string& initial_graph_path,
              const std::string& initial_partition_path, DecisionMode mode,
              bool sum_duplicate_weights, bool ignore_duplicates,
              const std::string& journal_path, const std::string& out_path) {
  if (initial_graph_path.empty() != initial_partition_path.empty()) {
    throw std::runtime_error(
        "--initial-graph and --initial-partition must be given together (or neither, for an "
        "empty start)");
  }

  Graph g;
  Partition p;
  if (!initial_graph_path.empty()) {
    CommonInput initial{initial_graph_path, sum_duplicate_weights};
    g = graph_from_events(load_dataset(initial));
    std::ifstream pf = open_input(initial_partition_path);
    p = load_partition(pf, g);
  }
  Tracker tracker(std::move(g), std::move(p), mode);

  std::ofstream journal_file;
  if (!journal_path.empty()) {
    journal_file = open_output(journal_path);
    tracker.set_journal(&journal_file);
  } else {
    tracker.set_journal(&std::cout);
  }

  // events are applied in file order; order matters on a stream. An empty
  // stream is legal here: the output is then the input partition.
  std::ifstream in = open_input(events_path);
  ParseResult parsed;
  try {
    parsed = parse_edge_list(in);
  } catch (const EmptyInput&) {
    std::cerr << "note: event stream is empty\n";
  }
  if (parsed.self_loops_dropped > 0) {
    std::cerr << "note: dropped " << parsed.self_loops_dropped << " self-loop line(s)\n";
  }
  std::size_t skipped = 0;
  for (const EdgeEvent& e : parsed.events) {
    if (ignore_duplicates && tracker.graph().edge_weight(e.source, e.target).has_value()) {
      ++skipped;
      continue;
    }
    tracker.apply_edge(e);
  }
  if (skipped > 0) {
    std::cerr << "note: skipped " << skipped << " duplicate event(s)\n";
  }

  if (!out_path.empty()) {
    std::ofstream out = open_output(out_path);
    write_partition(out, tracker.graph(), tracker.partition());
  } else {
    std::cout << "# partition\n";
    write_partition(std::cout, tracker.graph(), tracker.partition());
  }
  std::cerr << "q=" << modularity_from_fractions(tracker.graph(), tracker.partition())
            << " communities=" << tracker.partition().community_count() << '\n';
  return 0;
}

int cmd_stats(const std::string& journal_path) {
  std::ifstream in = open_input(journal_path);
  const OpStats stats = stats_from_journal(read_journal(in));
  print_op_stats(std::cout, stats);
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"streaming community detection toolkit"};
  app.require_subcommand(1);

  // detect
  auto* detect = app.add_subcommand("detect", "static community detection on an edge-list file");
  CommonInput detect_in;
  std::uint64_t detect_seed = 0;
  double detect_threshold = 1e-6;
  std::string detect_out;
  detect->add_option("--input", detect_in.input, "edge-list file")->required();
  auto* detect_seed_opt = detect->add_option("--seed", detect_seed, "node visit order seed");
  detect->add_option("--threshold", detect_threshold, "pass gain threshold")->capture_default_str();
  detect->add_option("--out", detect_out, "partition export path (default: stdout)");
  detect->add_flag("--sum-duplicate-weights", detect_in.sum_duplicate_weights,
                   "sum duplicate record weights instead of collapsing");

  // experiment
  auto* experiment = app.add_subcommand("experiment", "seeded split + incremental tracking");
  CommonInput exp_in;
  ExperimentConfig exp_cfg;
  std::string exp_mode = "paper";
  std::string exp_journal, exp_out;
  experiment->add_option("--input", exp_in.input, "edge-list file")->required();
  experiment->add_option("--ratio", exp_cfg.ratio, "initial portion ratio")->capture_default_str();
  experiment->add_option("--subsets", exp_cfg.subsets, "number of incremental subsets")->capture_default_str();
  experiment->add_option("--seed", exp_cfg.seed, "split + visit order seed")->capture_default_str();
  experiment->add_option("--mode", exp_mode, "merge decision mode: paper|exact")->capture_default_str()
      ->check(CLI::IsMember({"paper", "exact"}));
  experiment->add_option("--threshold", exp_cfg.louvain_threshold, "pass gain threshold")->capture_default_str();
  experiment->add_flag("--with-static-rerun", exp_cfg.with_static_rerun,
                       "re-run static detection cold at each checkpoint");
  experiment->add_flag("--ignore-duplicate-events", exp_cfg.ignore_duplicate_events,
                       "skip stream events whose pair already has an edge");
  experiment->add_flag("--sum-duplicate-weights", exp_in.sum_duplicate_weights,
                       "sum duplicate record weights instead of collapsing");
  experiment->add_option("--journal", exp_journal, "write one line per applied event here");
  experiment->add_option("--out", exp_out, "CSV report path (default: stdout)");
  std::string exp_plan;
  experiment->add_option("--plan-out", exp_plan, "serialize the seeded stream plan here");

  // track
  auto* track = app.add_subcommand("track", "apply an event stream in file order");
  std::string track_input, track_graph, track_partition, track_journal, track_out;
  std::string track_mode = "paper";
  bool track_sum = false, track_ignore_dup = false;
  track->add_option("--input", track_input, "event stream file")->required();
  track->add_option("--initial-graph", track_graph, "edge-list of the starting graph");
  track->add_option("--initial-partition", track_partition, "partition export of the start");
  track->add_option("--mode", track_mode, "merge decision mode: paper|exact")->capture_default_str()
      ->check(CLI::IsMember({"paper", "exact"}));
  track->add_flag("--ignore-duplicate-events", track_ignore_dup,
                  "skip stream events whose pair already has an edge");
  track->add_flag("--sum-duplicate-weights", track_sum,
                  "sum duplicate record weights in the initial graph");
  track->add_option("--journal", track_journal, "journal path (default: stdout)");
  track->add_option("--out", track_out, "final partition export path (default: stdout)");

  // stats
  auto* stats = app.add_subcommand("stats", "operation distribution of a journal");
  std::string stats_journal;
  stats->add_option("--journal", stats_journal, "journal file")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (detect->parsed()) {
      return cmd_detect(detect_in, detect_seed, detect_seed_opt->count() > 0, detect_threshold,
                        detect_out);
    }
    if (experiment->parsed()) {
      exp_cfg.mode = exp_mode == "exact" ? DecisionMode::Exact : DecisionMode::PaperFaithful;
      return cmd_experiment(exp_in, exp_cfg, exp_journal, exp_out, exp_plan);
    }
    if (track->parsed()) {
      const DecisionMode mode =
          track_mode == "exact" ? DecisionMode::Exact : DecisionMode::PaperFaithful;
      return cmd_track(track_input, track_graph, track_partition, mode, track_sum,
                       track_ignore_dup, track_journal, track_out);
    }
    if (stats->parsed()) {
      return cmd_stats(stats_journal);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace streamcd::cli
