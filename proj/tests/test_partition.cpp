#include <doctest.h>

#include <sstream>
#include <vector>

#include "oracle.hpp"
#include "streamcd/errors.hpp"
#include "streamcd/graph.hpp"
#include "streamcd/partition.hpp"
#include "streamcd/random.hpp"

using namespace streamcd;

namespace {

Graph graph_of(const std::vector<oracle::Edge>& edges) {
  Graph g;
  for (const auto& e : edges) g.add_or_increment_edge(e.u, e.v, e.w);
  return g;
}

Partition partition_of(const Graph& g, const oracle::Assignment& labels) {
  std::unordered_map<NodeId, CommunityId> map(labels.begin(), labels.end());
  return Partition::from_assignment(g, map);
}

oracle::Assignment snapshot(const Graph& g, const Partition& p) {
  oracle::Assignment out;
  for (Graph::Index i = 0; i < g.node_count(); ++i) {
    const NodeId u = g.node_at(i);
    out[u] = p.community_of(g, u);
  }
  return out;
}

// sigma maps against from-scratch recomputation
void check_sigmas(const Graph& g, const Partition& p, const oracle::Net& ref) {
  const auto expected = oracle::sigmas(ref, snapshot(g, p));
  double in_total = 0.0, sq_total = 0.0;
  for (const auto& [c, sig] : expected) {
    CHECK(p.sigma_in(c) == doctest::Approx(sig.in).epsilon(1e-9));
    CHECK(p.sigma_tot(c) == doctest::Approx(sig.tot).epsilon(1e-9));
    in_total += sig.in;
    sq_total += sig.tot * sig.tot;
  }
  CHECK(p.community_count() == expected.size());
  CHECK(p.sigma_in_total() == doctest::Approx(in_total).epsilon(1e-9));
  CHECK(p.sigma_tot_sq_total() == doctest::Approx(sq_total).epsilon(1e-9));
}

const std::vector<oracle::Edge> kTwoTriangles = {{1, 2, 1}, {2, 3, 1}, {1, 3, 1},
                                                 {4, 5, 1}, {5, 6, 1}, {4, 6, 1}};
const oracle::Assignment kTriangleSplit = {{1, 0}, {2, 0}, {3, 0}, {4, 1}, {5, 1}, {6, 1}};

}  // namespace

TEST_SUITE_BEGIN("partition");

TEST_CASE("modularity of reference partitions") {
  Graph g = graph_of(kTwoTriangles);
  Partition split = partition_of(g, kTriangleSplit);
  CHECK(modularity(g, split) == doctest::Approx(0.5).epsilon(1e-12));

  Partition lumped = partition_of(g, {{1, 0}, {2, 0}, {3, 0}, {4, 0}, {5, 0}, {6, 0}});
  CHECK(modularity(g, lumped) == doctest::Approx(0.0).epsilon(1e-12));

  Graph e = graph_of({{1, 2, 1}});
  Partition apart = partition_of(e, {{1, 0}, {2, 1}});
  CHECK(modularity(e, apart) == doctest::Approx(-0.5).epsilon(1e-12));
}

TEST_CASE("the three evaluation routes agree on random graphs") {
  SplitMix64 rng(7);
  for (int round = 0; round < 40; ++round) {
    const int n = 3 + static_cast<int>(rng.next_below(40));
    std::vector<oracle::Edge> edges;
    for (int i = 0; i < 3 * n; ++i) {
      oracle::Node u = rng.next_below(n);
      oracle::Node v = rng.next_below(n);
      if (u == v) continue;
      edges.push_back({u, v, 0.5 + rng.next_unit() * 2.0});
    }
    if (edges.empty()) continue;
    Graph g = graph_of(edges);
    oracle::Assignment labels;
    const int communities = 1 + static_cast<int>(rng.next_below(5));
    for (Graph::Index i = 0; i < g.node_count(); ++i) {
      labels[g.node_at(i)] = rng.next_below(communities);
    }
    Partition p = partition_of(g, labels);

    const double q_sums = modularity(g, p);
    const double q_fracs = modularity_from_fractions(g, p);
    const double q_pairs = modularity_pairwise(g, p);
    const double q_ref = oracle::modularity(oracle::net_of(edges), snapshot(g, p));
    CHECK(q_sums == doctest::Approx(q_fracs).epsilon(1e-9));
    CHECK(q_sums == doctest::Approx(q_pairs).epsilon(1e-9));
    CHECK(q_sums == doctest::Approx(q_ref).epsilon(1e-9));
    CHECK(q_sums >= -1.0 - 1e-12);
    CHECK(q_sums <= 1.0 + 1e-12);
  }
}

TEST_CASE("modularity requires full coverage") {
  Graph g = graph_of({{1, 2, 1}});
  Partition p;  // nobody assigned
  CHECK_THROWS_AS(modularity(g, p), UnassignedNode);
}

TEST_CASE("insertion gain formula arithmetic") {
  // raw closed form
  CHECK(insertion_gain(2.0, 2.0, 2.0, 3.0) == doctest::Approx(4.0 / 9.0).epsilon(1e-12));
  // no links into the target: pure degree penalty -sigma_tot*k/(2m*m)
  CHECK(insertion_gain(0.0, 3.0, 5.0, 10.0) ==
        doctest::Approx(-5.0 * 3.0 / (2.0 * 10.0 * 10.0)).epsilon(1e-12));
}

TEST_CASE("gain_insert matches a from-scratch before/after difference") {
  // unit triangle, third node joining its two neighbours
  Graph g = graph_of({{1, 2, 1}, {2, 3, 1}, {1, 3, 1}});
  Partition p = partition_of(g, {{1, 0}, {2, 0}, {3, 1}});
  const CommunityId pair_community = p.community_of(g, 1);

  oracle::Net ref = oracle::net_of({{1, 2, 1}, {2, 3, 1}, {1, 3, 1}});
  const double q_apart = oracle::modularity(ref, {{1, 0}, {2, 0}, {3, 1}});
  const double q_joined = oracle::modularity(ref, {{1, 0}, {2, 0}, {3, 0}});
  const double expected = q_joined - q_apart;
  CHECK(expected == doctest::Approx(2.0 / 9.0).epsilon(1e-12));

  // gain of the move = leave own singleton + join the pair
  const double gain = p.gain_remove(g, 3) + p.gain_insert(g, 3, pair_community);
  CHECK(gain == doctest::Approx(expected).epsilon(1e-9));

  // removal from the full triangle community mirrors the join
  Partition whole = partition_of(g, {{1, 0}, {2, 0}, {3, 0}});
  CHECK(whole.gain_remove(g, 3) == doctest::Approx(-2.0 / 9.0).epsilon(1e-9));
}

TEST_CASE("symmetric candidates yield equal gains") {
  //   1-2 community a, 3-4 community b, node 5 linked equally to both
  Graph g = graph_of({{1, 2, 1}, {3, 4, 1}, {5, 1, 2}, {5, 3, 2}});
  Partition p = partition_of(g, {{1, 0}, {2, 0}, {3, 1}, {4, 1}, {5, 2}});
  const CommunityId a = p.community_of(g, 1);
  const CommunityId b = p.community_of(g, 3);
  CHECK(p.gain_insert(g, 5, a) == doctest::Approx(p.gain_insert(g, 5, b)).epsilon(1e-12));
}

TEST_CASE("remove then reinsert is a zero-sum pair") {
  Graph g = graph_of(kTwoTriangles);
  Partition p = partition_of(g, kTriangleSplit);
  for (NodeId u : {1, 2, 3, 4, 5, 6}) {
    const CommunityId c = p.community_of(g, u);
    CHECK(p.gain_remove(g, u) + p.gain_insert(g, u, c) == doctest::Approx(0.0).epsilon(1e-12));
  }
  // singleton community: both directions are zero against itself
  Graph e = graph_of({{1, 2, 1}});
  Partition q = partition_of(e, {{1, 0}, {2, 1}});
  CHECK(q.gain_remove(e, 1) + q.gain_insert(e, 1, q.community_of(e, 1)) ==
        doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("move_node retires emptied communities and never reuses ids") {
  Graph g = graph_of({{1, 2, 1}, {3, 4, 1}});
  Partition p = partition_of(g, {{1, 0}, {2, 1}, {3, 2}, {4, 2}});
  const CommunityId lone = p.community_of(g, 2);
  const CommunityId target = p.community_of(g, 1);
  REQUIRE(p.community_count() == 3);

  p.move_node(g, 2, target);
  CHECK(p.community_count() == 2);
  CHECK_FALSE(p.has_community(lone));
  CHECK_THROWS_AS(p.member_count(lone), UnknownCommunity);

  // a later community gets a fresh id, not the retired one
  Graph g2 = g;
  g2.add_or_increment_edge(7, 8, 1.0);
  const NodeId seeds[] = {7, 8};
  const CommunityId fresh = p.create_community(g2, seeds);
  CHECK(fresh != lone);
  CHECK(fresh > lone);
}

TEST_CASE("assign_new_node folds edges into the sums") {
  // graph already holds 3's edges; community {1,2} takes it in
  Graph g = graph_of({{1, 2, 13}, {1, 3, 8}, {2, 3, 6}});
  std::unordered_map<NodeId, CommunityId> two = {{1, 0}, {2, 0}};
  Partition p = Partition::from_assignment(g, two);
  const CommunityId c = p.community_of(g, 1);
  CHECK(p.sigma_in(c) == doctest::Approx(26.0));   // the 1-2 edge, both directions
  CHECK(p.sigma_tot(c) == doctest::Approx(40.0));  // k_1 + k_2 = 21 + 19

  p.assign_new_node(g, 3, c);
  CHECK(p.sigma_in(c) == doctest::Approx(54.0));   // += 2 * (8 + 6)
  CHECK(p.sigma_tot(c) == doctest::Approx(54.0));  // += k_3 = 14
  CHECK(p.member_count(c) == 3);

  oracle::Net ref = oracle::net_of({{1, 2, 13}, {1, 3, 8}, {2, 3, 6}});
  check_sigmas(g, p, ref);
  CHECK_THROWS_AS(p.assign_new_node(g, 3, c), AlreadyAssigned);
  CHECK_THROWS_AS(p.assign_new_node(g, 1, 999), AlreadyAssigned);
}

TEST_CASE("create_community seeds a pair") {
  Graph g = graph_of({{1, 2, 13}, {4, 5, 12}});
  std::unordered_map<NodeId, CommunityId> start = {{1, 0}, {2, 0}};
  Partition p = Partition::from_assignment(g, start);
  const NodeId seeds[] = {4, 5};
  const CommunityId c = p.create_community(g, seeds);
  CHECK(p.sigma_in(c) == doctest::Approx(24.0));
  CHECK(p.sigma_tot(c) == doctest::Approx(24.0));
  CHECK(p.member_count(c) == 2);
}

TEST_CASE("merge keeps exact sums including the cross weight") {
  // communities {1,2} and {3,4} joined by (2,3,1); heavy pair elsewhere
  const std::vector<oracle::Edge> edges = {{1, 2, 1}, {3, 4, 1}, {2, 3, 1}, {5, 6, 10}};
  Graph g = graph_of(edges);
  Partition p = partition_of(g, {{1, 0}, {2, 0}, {3, 1}, {4, 1}, {5, 2}, {6, 2}});
  const CommunityId a = p.community_of(g, 1);
  const CommunityId b = p.community_of(g, 3);
  CHECK(g.total_weight() == doctest::Approx(13.0));
  CHECK(p.cross_weight(g, a, b) == doctest::Approx(1.0));

  const CommunityId survivor = p.merge_communities(g, a, b);
  CHECK(p.sigma_in(survivor) == doctest::Approx(6.0));  // 2 + 2 + 2*cross
  CHECK(p.sigma_tot(survivor) == doctest::Approx(6.0));
  CHECK(p.member_count(survivor) == 4);
  check_sigmas(g, p, oracle::net_of(edges));

  // and the merged modularity equals the from-scratch value
  const double q_ref = oracle::modularity(oracle::net_of(edges), snapshot(g, p));
  CHECK(modularity(g, p) == doctest::Approx(q_ref).epsilon(1e-12));
}

TEST_CASE("merge of two unconnected singletons") {
  Graph g = graph_of({{1, 9, 1}, {2, 9, 1}});
  Partition p = partition_of(g, {{1, 0}, {2, 1}, {9, 2}});
  const CommunityId survivor =
      p.merge_communities(g, p.community_of(g, 1), p.community_of(g, 2));
  CHECK(p.sigma_in(survivor) == doctest::Approx(0.0));
  CHECK(p.member_count(survivor) == 2);
}

TEST_CASE("merge picks the larger side as survivor, ties by smaller id") {
  Graph g = graph_of({{1, 2, 1}, {2, 3, 1}, {4, 5, 1}});
  Partition p = partition_of(g, {{1, 0}, {2, 0}, {3, 0}, {4, 1}, {5, 1}});
  const CommunityId big = p.community_of(g, 1);
  const CommunityId small = p.community_of(g, 4);
  CHECK(p.merge_communities(g, small, big) == big);

  Graph h = graph_of({{1, 2, 1}, {4, 5, 1}});
  Partition q = partition_of(h, {{1, 0}, {2, 0}, {4, 1}, {5, 1}});
  const CommunityId first = q.community_of(h, 1);
  CHECK(q.merge_communities(h, q.community_of(h, 4), first) == first);  // tie -> smaller id

  CHECK_THROWS_AS(p.merge_communities(g, big, big), SelfMerge);
  CHECK_THROWS_AS(p.merge_communities(g, big, 424242), UnknownCommunity);
}

TEST_CASE("random mutation sequences stay oracle-exact") {
  SplitMix64 rng(991);
  for (int round = 0; round < 20; ++round) {
    const int n = 4 + static_cast<int>(rng.next_below(24));
    std::vector<oracle::Edge> edges;
    for (int i = 0; i < 4 * n; ++i) {
      oracle::Node u = rng.next_below(n);
      oracle::Node v = rng.next_below(n);
      if (u == v) continue;
      edges.push_back({u, v, 0.5 + rng.next_unit()});
    }
    if (edges.size() < 2) continue;
    Graph g = graph_of(edges);
    oracle::Net ref = oracle::net_of(edges);
    Partition p = Partition::singletons(g);

    for (int step = 0; step < 60; ++step) {
      const auto ids = p.community_ids();
      const NodeId u = g.node_at(static_cast<Graph::Index>(rng.next_below(g.node_count())));
      switch (rng.next_below(3)) {
        case 0: {  // move
          const CommunityId target = ids[rng.next_below(ids.size())];
          p.move_node(g, u, target);
          break;
        }
        case 1: {  // merge two distinct communities
          if (ids.size() < 2) break;
          const CommunityId a = ids[rng.next_below(ids.size())];
          const CommunityId b = ids[rng.next_below(ids.size())];
          if (a != b) p.merge_communities(g, a, b);
          break;
        }
        default: {  // gain consistency for a hypothetical move
          const CommunityId target = ids[rng.next_below(ids.size())];
          const CommunityId current = p.community_of(g, u);
          if (target == current) break;
          const double claimed = p.gain_remove(g, u) + p.gain_insert(g, u, target);
          const double q_before = modularity(g, p);
          Partition probe = p;
          probe.move_node(g, u, target);
          const double q_after = modularity(g, probe);
          CHECK(claimed == doctest::Approx(q_after - q_before).epsilon(1e-9));
          const double q_ref_before = oracle::modularity(ref, snapshot(g, p));
          const double q_ref_after = oracle::modularity(ref, snapshot(g, probe));
          CHECK(claimed == doctest::Approx(q_ref_after - q_ref_before).epsilon(1e-9));
          break;
        }
      }
    }
    check_sigmas(g, p, ref);
    CHECK(modularity(g, p) ==
          doctest::Approx(oracle::modularity(ref, snapshot(g, p))).epsilon(1e-9));
  }
}

TEST_CASE("partition export and reload") {
  Graph g = graph_of({{10, 2, 1}, {2, 7, 1}});
  Partition p = partition_of(g, {{10, 5}, {2, 5}, {7, 8}});
  std::ostringstream out;
  write_partition(out, g, p);
  CHECK(out.str() == "2\t0\n7\t1\n10\t0\n");  // sorted by node id, labels renumbered

  std::istringstream in(out.str());
  Partition back = load_partition(in, g);
  CHECK(back.community_of(g, 10) == back.community_of(g, 2));
  CHECK(back.community_of(g, 7) != back.community_of(g, 10));

  std::istringstream bad("2\t0\n7\t1\n10\t0\n99\t1\n");
  CHECK_THROWS_AS(load_partition(bad, g), UnknownNodeInPartitionFile);
  std::istringstream partial("2\t0\n");
  CHECK_THROWS_AS(load_partition(partial, g), UnassignedNode);
}

TEST_SUITE_END();
