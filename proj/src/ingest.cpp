#include "streamcd/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>

#include "streamcd/errors.hpp"
#include "streamcd/random.hpp"

namespace streamcd {

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
    std::size_t end = pos;
    while (end < line.size() && line[end] != ' ' && line[end] != '\t') ++end;
    if (end > pos) fields.push_back(line.substr(pos, end - pos));
    pos = end;
  }
  return fields;
}

NodeId parse_node_id(std::string_view field, std::size_t line_no) {
  NodeId value = 0;
  const char* last = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), last, value);
  if (ec != std::errc{} || ptr != last) {
    throw MalformedLine(line_no, "bad node id \"" + std::string(field) + "\"");
  }
  return value;
}

Weight parse_weight(std::string_view field, std::size_t line_no) {
  Weight value = 0.0;
  const char* last = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), last, value);
  if (ec != std::errc{} || ptr != last || !std::isfinite(value) || value <= 0.0) {
    throw MalformedLine(line_no, "bad edge weight \"" + std::string(field) + "\"");
  }
  return value;
}

struct PairHash {
  std::size_t operator()(const std::pair<NodeId, NodeId>& p) const {
    return std::hash<NodeId>{}(p.first * 0x9e3779b97f4a7c15ULL + p.second);
  }
};

}  // namespace

ParseResult parse_edge_list(std::istream& in, Weight default_weight) {
  ParseResult result;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto fields = split_fields(line);
    if (fields.empty()) continue;
    if (fields.size() != 2 && fields.size() != 3) {
      throw MalformedLine(line_no, "expected 2 or 3 fields, got " +
                                       std::to_string(fields.size()));
    }
    EdgeEvent e;
    e.source = parse_node_id(fields[0], line_no);
    e.target = parse_node_id(fields[1], line_no);
    e.weight = fields.size() == 3 ? parse_weight(fields[2], line_no) : default_weight;
    if (e.source == e.target) {
      ++result.self_loops_dropped;
      continue;
    }
    result.events.push_back(e);
  }
  if (result.events.empty()) {
    throw EmptyInput("no edges found in input");
  }
  return result;
}

void write_edge_list(std::ostream& out, const std::vector<EdgeEvent>& events) {
  char buf[32];
  for (const EdgeEvent& e : events) {
    std::snprintf(buf, sizeof(buf), "%.12g", e.weight);
    out << e.source << '\t' << e.target << '\t' << buf << '\n';
  }
}

SymmetrizeResult symmetrize(const std::vector<EdgeEvent>& events, bool sum_weights) {
  SymmetrizeResult result;
  result.events.reserve(events.size());
  std::unordered_map<std::pair<NodeId, NodeId>, std::size_t, PairHash> seen;
  seen.reserve(events.size());
  for (const EdgeEvent& e : events) {
    const std::pair<NodeId, NodeId> key{std::min(e.source, e.target),
                                        std::max(e.source, e.target)};
    const auto [it, inserted] = seen.try_emplace(key, result.events.size());
    if (inserted) {
      result.events.push_back({key.first, key.second, e.weight});
    } else {
      if (sum_weights) result.events[it->second].weight += e.weight;
      ++result.merged;
    }
  }
  return result;
}

StreamPlan split_stream(std::vector<EdgeEvent> events, double ratio, std::size_t subset_count,
                        std::uint64_t seed) {
  if (!(ratio > 0.0 && ratio < 1.0)) {
    throw std::invalid_argument("ratio must lie in (0, 1), got " + std::to_string(ratio));
  }
  if (subset_count == 0) {
    throw std::invalid_argument("subset count must be at least 1");
  }
  if (events.size() < subset_count + 1) {
    throw TooFewEdges("need at least " + std::to_string(subset_count + 1) + " events, got " +
                      std::to_string(events.size()));
  }

  seeded_shuffle(events, seed);

  StreamPlan plan;
  plan.seed = seed;
  plan.ratio = ratio;
  plan.subset_count = subset_count;

  const std::size_t initial_count =
      static_cast<std::size_t>(std::ceil(ratio * static_cast<double>(events.size())));
  plan.initial.assign(events.begin(), events.begin() + static_cast<std::ptrdiff_t>(initial_count));

  const std::size_t rest = events.size() - initial_count;
  const std::size_t base = rest / subset_count;
  const std::size_t extra = rest % subset_count;  // first `extra` subsets get one more
  std::size_t offset = initial_count;
  plan.subsets.resize(subset_count);
  for (std::size_t s = 0; s < subset_count; ++s) {
    const std::size_t size = base + (s < extra ? 1 : 0);
    plan.subsets[s].assign(events.begin() + static_cast<std::ptrdiff_t>(offset),
                           events.begin() + static_cast<std::ptrdiff_t>(offset + size));
    offset += size;
  }
  return plan;
}

void write_stream_plan(std::ostream& out, const StreamPlan& plan) {
  char ratio_buf[32];
  std::snprintf(ratio_buf, sizeof(ratio_buf), "%.12g", plan.ratio);
  out << "# streamplan v1 seed=" << plan.seed << " ratio=" << ratio_buf
      << " subsets=" << plan.subset_count << '\n';
  out << "# initial " << plan.initial.size() << '\n';
  write_edge_list(out, plan.initial);
  for (std::size_t s = 0; s < plan.subsets.size(); ++s) {
    out << "# subset " << s << ' ' << plan.subsets[s].size() << '\n';
    write_edge_list(out, plan.subsets[s]);
  }
}

StreamPlan read_stream_plan(std::istream& in) {
  StreamPlan plan;
  std::string line;
  std::size_t line_no = 0;

  if (!std::getline(in, line)) {
    throw EmptyInput("stream plan is empty");
  }
  ++line_no;
  {
    unsigned long long seed = 0;
    double ratio = 0.0;
    std::size_t subsets = 0;
    if (std::sscanf(line.c_str(), "# streamplan v1 seed=%llu ratio=%lf subsets=%zu", &seed,
                    &ratio, &subsets) != 3) {
      throw MalformedLine(line_no, "bad stream plan header");
    }
    plan.seed = seed;
    plan.ratio = ratio;
    plan.subset_count = subsets;
  }

  std::vector<EdgeEvent>* section = nullptr;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::size_t count = 0;
      std::size_t index = 0;
      if (std::sscanf(line.c_str(), "# initial %zu", &count) == 1) {
        section = &plan.initial;
      } else if (std::sscanf(line.c_str(), "# subset %zu %zu", &index, &count) == 2) {
        plan.subsets.resize(std::max(plan.subsets.size(), index + 1));
        section = &plan.subsets[index];
      } else {
        throw MalformedLine(line_no, "bad section marker");
      }
      continue;
    }
    if (section == nullptr) {
      throw MalformedLine(line_no, "event line before any section marker");
    }
    const auto fields = split_fields(line);
    if (fields.size() != 3) {
      throw MalformedLine(line_no, "expected 3 fields in a plan event line");
    }
    EdgeEvent e;
    e.source = parse_node_id(fields[0], line_no);
    e.target = parse_node_id(fields[1], line_no);
    e.weight = parse_weight(fields[2], line_no);
    section->push_back(e);
  }
  if (plan.subsets.size() != plan.subset_count) {
    throw EmptyInput("stream plan declares " + std::to_string(plan.subset_count) +
                     " subsets but holds " + std::to_string(plan.subsets.size()));
  }
  return plan;
}

}  // namespace streamcd
