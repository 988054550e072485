#include "streamcd/louvain.hpp"

#include <map>
#include <numeric>
#include <vector>

#include "streamcd/errors.hpp"
#include "streamcd/random.hpp"

namespace streamcd::louvain {

namespace {

// A move must clear this margin to count; blocks oscillation on ties.
constexpr double kMinGain = 1e-12;

}  // namespace

PhaseResult local_move_phase(const Graph& g, Partition& p, const Config& config) {
  const double q_before = modularity(g, p);
  const Weight m = g.total_weight();

  std::vector<Graph::Index> order(g.node_count());
  std::iota(order.begin(), order.end(), 0);
  if (config.node_order_seed) {
    seeded_shuffle(order, *config.node_order_seed);
  }

  // scratch: weight from the current node into each touched community
  std::unordered_map<CommunityId, Weight> link_weight;
  bool any_move = false;
  bool moved_this_sweep = true;

  while (moved_this_sweep) {
    moved_this_sweep = false;
    for (const Graph::Index iu : order) {
      const NodeId u = g.node_at(iu);
      const CommunityId current = p.community_of(g, u);
      const Weight k = g.degree_at(iu);

      link_weight.clear();
      link_weight[current] += 0.0;  // own community is always a candidate
      for (const auto& [iv, w] : g.adjacent(iu)) {
        if (iv == iu) continue;
        link_weight[p.community_at(iv)] += w;
      }

      const double remove_gain =
          -insertion_gain(link_weight[current], k, p.sigma_tot(current) - k, m);

      CommunityId best = current;
      double best_gain = insertion_gain(link_weight[current], k, p.sigma_tot(current) - k, m);
      for (const auto& [c, k_in] : link_weight) {
        if (c == current) continue;
        const double gain = insertion_gain(k_in, k, p.sigma_tot(c), m);
        if (gain > best_gain) {
          best_gain = gain;
          best = c;
        }
      }

      if (best != current && remove_gain + best_gain > kMinGain) {
        p.move_node(g, u, best);
        moved_this_sweep = true;
        any_move = true;
      }
    }
  }

  return {any_move, modularity(g, p) - q_before};
}

std::pair<Graph, AggregationMap> aggregate(const Graph& g, const Partition& p) {
  // Ordered accumulation keeps the coarse graph's node numbering independent
  // of hash iteration order.
  std::map<CommunityId, Weight> internal;  // single-count, self-loops included
  std::map<std::pair<CommunityId, CommunityId>, Weight> cross;

  for (Graph::Index iu = 0; iu < g.node_count(); ++iu) {
    const CommunityId cu = p.community_of(g, g.node_at(iu));
    for (const auto& [iv, w] : g.adjacent(iu)) {
      if (iv == iu) {
        internal[cu] += w;
      } else if (iv > iu) {
        const CommunityId cv = p.community_at(iv);
        if (cu == cv) {
          internal[cu] += w;
        } else {
          cross[{std::min(cu, cv), std::max(cu, cv)}] += w;
        }
      }
    }
  }

  Graph coarse;
  for (const CommunityId c : p.community_ids()) {
    coarse.ensure_node(c);
    const auto it = internal.find(c);
    if (it != internal.end() && it->second > 0.0) {
      coarse.add_self_loop(c, it->second);
    }
  }
  for (const auto& [pair, w] : cross) {
    coarse.add_or_increment_edge(pair.first, pair.second, w);
  }

  AggregationMap map;
  map.fine_to_coarse.reserve(g.node_count());
  for (Graph::Index iu = 0; iu < g.node_count(); ++iu) {
    const NodeId u = g.node_at(iu);
    map.fine_to_coarse.emplace(u, p.community_of(g, u));
  }
  return {std::move(coarse), std::move(map)};
}

Result run(const Graph& g, const Config& config) {
  if (g.node_count() == 0) {
    throw EmptyGraph("cannot detect communities of an empty graph");
  }

  Graph level = g;
  Partition p = Partition::singletons(level);

  // original node -> node of the current level
  std::unordered_map<NodeId, NodeId> flat;
  flat.reserve(g.node_count());
  for (Graph::Index i = 0; i < g.node_count(); ++i) {
    flat.emplace(g.node_at(i), g.node_at(i));
  }

  int passes = 0;
  while (passes < config.max_passes) {
    Config phase_config = config;
    if (config.node_order_seed) {
      // distinct order per pass, still fully determined by the seed
      phase_config.node_order_seed = *config.node_order_seed + static_cast<std::uint64_t>(passes);
    }
    const PhaseResult phase = local_move_phase(level, p, phase_config);
    ++passes;
    if (!phase.improved) break;

    auto [coarse, amap] = aggregate(level, p);
    for (auto& [orig, cur] : flat) {
      cur = amap.fine_to_coarse.at(cur);
    }
    level = std::move(coarse);
    p = Partition::singletons(level);

    if (phase.q_gain < config.gain_threshold) break;
  }

  Result result;
  result.partition = Partition::from_assignment(g, flat);
  result.q = modularity(g, result.partition);
  result.passes = passes;
  return result;
}

}  // namespace streamcd::louvain
