#include "streamcd/incremental.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "streamcd/errors.hpp"

namespace streamcd {

const char* to_string(EdgeType t) {
  switch (t) {
    case EdgeType::InnerCommunity: return "inner_community";
    case EdgeType::CrossCommunity: return "cross_community";
    case EdgeType::HalfNew: return "half_new";
    case EdgeType::New: return "new";
  }
  return "?";
}

const char* to_string(StreamOp o) {
  switch (o) {
    case StreamOp::Keep: return "keep";
    case StreamOp::Merge: return "merge";
    case StreamOp::AssignToExisting: return "assign_to_existing";
    case StreamOp::CreateNew: return "create_new";
  }
  return "?";
}

bool should_merge(Weight m_before, Weight w, Weight sigma_tot_i, Weight sigma_tot_j) {
  return w * (2.0 * m_before + 2.0 * w) > 2.0 * (sigma_tot_i + w) * (sigma_tot_j + w);
}

namespace {

void check_event(const EdgeEvent& e) {
  if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
    throw NonPositiveWeight("event weight must be finite and > 0, got " +
                            std::to_string(e.weight));
  }
  if (e.source == e.target) {
    throw SelfLoopRejected("self-loop event on node " + std::to_string(e.source));
  }
}

}  // namespace

Tracker::Tracker(Graph graph, Partition partition, DecisionMode mode)
    : graph_(std::move(graph)), partition_(std::move(partition)), mode_(mode) {
  if (partition_.assigned_count() != graph_.node_count()) {
    throw UnassignedNode("tracker needs every graph node assigned; got " +
                         std::to_string(partition_.assigned_count()) + " of " +
                         std::to_string(graph_.node_count()));
  }
}

EdgeType Tracker::classify(const EdgeEvent& e) const {
  const bool has_src = graph_.contains_node(e.source);
  const bool has_dst = graph_.contains_node(e.target);
  if (has_src && has_dst) {
    return partition_.community_of(graph_, e.source) == partition_.community_of(graph_, e.target)
               ? EdgeType::InnerCommunity
               : EdgeType::CrossCommunity;
  }
  return (has_src || has_dst) ? EdgeType::HalfNew : EdgeType::New;
}

// Q after adding the edge, for a hypothetical outcome expressed as the change
// it makes to sum(sigma_in) and sum(sigma_tot^2).
double Tracker::modularity_after_sigma_change(Weight w, double d_sigma_in,
                                              double d_sigma_sq) const {
  const double two_m = 2.0 * graph_.total_weight() + 2.0 * w;
  const double s1 = partition_.sigma_in_total() + d_sigma_in;
  const double s2 = partition_.sigma_tot_sq_total() + d_sigma_sq;
  return (s1 - s2 / two_m) / two_m;
}

CrossEdgeGains Tracker::cross_edge_gains(const EdgeEvent& e) const {
  const Weight w = e.weight;
  const CommunityId ci = partition_.community_of(graph_, e.source);
  const CommunityId cj = partition_.community_of(graph_, e.target);
  const Weight si = partition_.sigma_tot(ci);
  const Weight sj = partition_.sigma_tot(cj);
  const double q_before = modularity(graph_, partition_);

  const double q_keep = modularity_after_sigma_change(
      w, 0.0, (si + w) * (si + w) + (sj + w) * (sj + w) - si * si - sj * sj);

  // Combined community: sigma_in picks up the new edge, and in Exact mode
  // also the cross weight already sitting between the two communities.
  const double prior_cross =
      mode_ == DecisionMode::Exact ? partition_.cross_weight(graph_, ci, cj) : 0.0;
  const double merged_tot = si + sj + 2.0 * w;
  const double q_merge = modularity_after_sigma_change(
      w, 2.0 * w + 2.0 * prior_cross, merged_tot * merged_tot - si * si - sj * sj);

  return {q_keep - q_before, q_merge - q_before};
}

AppliedOp Tracker::apply_edge(const EdgeEvent& e) {
  check_event(e);

  AppliedOp rec;
  rec.edge = e;
  rec.edge_type = classify(e);
  const Weight w = e.weight;

  switch (rec.edge_type) {
    case EdgeType::InnerCommunity: {
      const CommunityId c = partition_.community_of(graph_, e.source);
      const double q_before = modularity(graph_, partition_);
      graph_.add_or_increment_edge(e.source, e.target, w);
      partition_.record_edge_insertion(graph_, e.source, e.target, w);
      rec.operation = StreamOp::Keep;
      rec.dq_keep = modularity(graph_, partition_) - q_before;
      rec.touched = {c};
      break;
    }
    case EdgeType::CrossCommunity: {
      const CommunityId ci = partition_.community_of(graph_, e.source);
      const CommunityId cj = partition_.community_of(graph_, e.target);
      const Weight m_before = graph_.total_weight();
      const Weight si = partition_.sigma_tot(ci);
      const Weight sj = partition_.sigma_tot(cj);
      const CrossEdgeGains gains = cross_edge_gains(e);
      const bool merge = mode_ == DecisionMode::PaperFaithful
                             ? should_merge(m_before, w, si, sj)
                             : gains.merge > gains.keep;

      graph_.add_or_increment_edge(e.source, e.target, w);
      partition_.record_edge_insertion(graph_, e.source, e.target, w);
      if (merge) {
        partition_.merge_communities(graph_, ci, cj);
        rec.operation = StreamOp::Merge;
      } else {
        rec.operation = StreamOp::Keep;
      }
      rec.dq_keep = gains.keep;
      rec.dq_alt = gains.merge;
      rec.touched = {ci, cj};
      break;
    }
    case EdgeType::HalfNew: {
      const NodeId existing = graph_.contains_node(e.source) ? e.source : e.target;
      const NodeId fresh = existing == e.source ? e.target : e.source;
      const CommunityId c = partition_.community_of(graph_, existing);
      const Weight sc = partition_.sigma_tot(c);
      const double q_before = modularity(graph_, partition_);

      const double q_assign =
          modularity_after_sigma_change(w, 2.0 * w, (sc + 2.0 * w) * (sc + 2.0 * w) - sc * sc);
      const double q_create = modularity_after_sigma_change(
          w, 0.0, (sc + w) * (sc + w) - sc * sc + w * w);

      graph_.add_or_increment_edge(e.source, e.target, w);
      partition_.record_edge_insertion(graph_, e.source, e.target, w);
      partition_.assign_new_node(graph_, fresh, c);
      rec.operation = StreamOp::AssignToExisting;
      rec.dq_keep = q_assign - q_before;
      rec.dq_alt = q_create - q_before;
      rec.touched = {c};
      break;
    }
    case EdgeType::New: {
      const double q_before = modularity(graph_, partition_);
      const double q_create = modularity_after_sigma_change(w, 2.0 * w, 4.0 * w * w);

      graph_.add_or_increment_edge(e.source, e.target, w);
      partition_.record_edge_insertion(graph_, e.source, e.target, w);
      const NodeId seeds[2] = {e.source, e.target};
      const CommunityId c = partition_.create_community(graph_, seeds);
      rec.operation = StreamOp::CreateNew;
      rec.dq_alt = q_create - q_before;
      rec.touched = {c};
      break;
    }
  }

  ++stats_.total;
  ++stats_.by_op[static_cast<std::size_t>(rec.operation)];
  ++stats_.by_type[static_cast<std::size_t>(rec.edge_type)];
  if (journal_ != nullptr) {
    write_journal_line(*journal_, rec);
  }
  return rec;
}

OpStats Tracker::stats() const {
  if (stats_.total == 0) {
    throw NoEventsProcessed("no events processed yet");
  }
  return stats_;
}

namespace {

void write_delta(std::ostream& out, const std::optional<double>& dq) {
  if (dq) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", *dq);
    out << buf;
  } else {
    out << '-';
  }
}

bool parse_edge_type(const std::string& s, EdgeType& out) {
  for (const EdgeType t : {EdgeType::InnerCommunity, EdgeType::CrossCommunity, EdgeType::HalfNew,
                           EdgeType::New}) {
    if (s == to_string(t)) {
      out = t;
      return true;
    }
  }
  return false;
}

bool parse_stream_op(const std::string& s, StreamOp& out) {
  for (const StreamOp o : {StreamOp::Keep, StreamOp::Merge, StreamOp::AssignToExisting,
                           StreamOp::CreateNew}) {
    if (s == to_string(o)) {
      out = o;
      return true;
    }
  }
  return false;
}

std::optional<double> parse_delta(const std::string& s, std::size_t line_no) {
  if (s == "-") return std::nullopt;
  try {
    return std::stod(s);
  } catch (const std::exception&) {
    throw MalformedLine(line_no, "bad delta value \"" + s + "\"");
  }
}

}  // namespace

void write_journal_line(std::ostream& out, const AppliedOp& op) {
  out << to_string(op.edge_type) << '\t' << to_string(op.operation) << '\t';
  write_delta(out, op.dq_keep);
  out << '\t';
  write_delta(out, op.dq_alt);
  out << '\n';
}

std::vector<JournalEntry> read_journal(std::istream& in) {
  std::vector<JournalEntry> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::string type_s, op_s, keep_s, alt_s;
    if (!(fields >> type_s >> op_s >> keep_s >> alt_s)) {
      throw MalformedLine(line_no, "expected \"type op dq_keep dq_alt\"");
    }
    JournalEntry entry{};
    if (!parse_edge_type(type_s, entry.edge_type)) {
      throw MalformedLine(line_no, "unknown edge type \"" + type_s + "\"");
    }
    if (!parse_stream_op(op_s, entry.operation)) {
      throw MalformedLine(line_no, "unknown operation \"" + op_s + "\"");
    }
    entry.dq_keep = parse_delta(keep_s, line_no);
    entry.dq_alt = parse_delta(alt_s, line_no);
    entries.push_back(entry);
  }
  return entries;
}

OpStats stats_from_journal(const std::vector<JournalEntry>& entries) {
  if (entries.empty()) {
    throw NoEventsProcessed("journal holds no events");
  }
  OpStats stats;
  for (const JournalEntry& e : entries) {
    ++stats.total;
    ++stats.by_op[static_cast<std::size_t>(e.operation)];
    ++stats.by_type[static_cast<std::size_t>(e.edge_type)];
  }
  return stats;
}

}  // namespace streamcd
