// Copyright 2026 the mgsp authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <catch2/catch_amalgamated.hpp>

#include "mgsp/catalog.hpp"
#include "mgsp/enumerate.hpp"
#include "mgsp/partition.hpp"

using namespace mgsp;

namespace {

int center_of(const MetricGraph& g) {
  int best = 0;
  for (int v = 0; v < g.vertex_count(); ++v)
    if (g.degree(v) > g.degree(best)) best = v;
  return best;
}

MetricGraph loop_with_three_pendants() {
  return build_graph({{0, 2.0}, {1, 1.0}, {2, 1.0}, {3, 1.0}},
                     {{{0, End::Source}, {0, End::Target}, {1, End::Source},
                       {2, End::Source}, {3, End::Source}},
                      {{1, End::Target}},
                      {{2, End::Target}},
                      {{3, End::Target}}});
}

}  // namespace

TEST_CASE("three pendant clusters have a rank-3 minimal cut") {
  MetricGraph g = loop_with_three_pendants();
  // Rank-5 cut: maximal cut at the center plus one interior cut of the loop.
  CutRelation to_e = maximal_cut(g, {center_of(g)});
  CutRelation rel2 = subdivide_relation(to_e, 0, 1.0);
  const MetricGraph& ce = rel2.cut();
  int dummy = -1;
  for (int v = 0; v < ce.vertex_count(); ++v)
    if (ce.degree(v) == 2) dummy = v;
  CutRelation total =
      compose(split_vertex(ce, dummy, {{ce.vertex(dummy)[0]}, {ce.vertex(dummy)[1]}}), rel2);
  REQUIRE(total.rank() == 5);

  Partition p = partition_from_cut(rel2.original(), total, {{1}, {2}, {3}});
  REQUIRE(p.k() == 3);
  REQUIRE(p.rank == 3);  // the loop cuts are undone
  REQUIRE_FALSE(p.exhaustive);
  REQUIRE(p.boundary_vertices.size() == 1);
  // The minimal cut graph keeps the loop intact as one component.
  REQUIRE(p.minimal_cut.cut().component_count() == 4);
  REQUIRE(topology(p.minimal_cut.cut()).betti == 1);
}

TEST_CASE("exhaustive selection keeps the original cut") {
  MetricGraph g = catalog::star(3);
  CutRelation rel = maximal_cut(g, {center_of(g)});
  Partition p = partition_all_components(g, rel);
  REQUIRE(p.exhaustive);
  REQUIRE(p.k() == 3);
  REQUIRE(p.minimal_cut.cut() == rel.cut());
  REQUIRE(p.rank == rel.rank());
}

TEST_CASE("partition_from_cut rejects non-components") {
  MetricGraph g = catalog::star(3);
  CutRelation rel = maximal_cut(g, {center_of(g)});
  REQUIRE_THROWS_AS(partition_from_cut(g, rel, {{0, 1}}), NotAComponent);
  REQUIRE_THROWS_AS(partition_from_cut(g, rel, {{0}, {0}}), NotAComponent);
  REQUIRE_THROWS_AS(partition_from_cut(g, rel, {}), EmptySelection);
}

TEST_CASE("exhaustive extension absorbs the leftover component") {
  MetricGraph g = loop_with_three_pendants();
  CutRelation rel = maximal_cut(g, {center_of(g)});
  Partition p = partition_from_cut(g, rel, {{1}, {2}, {3}});
  REQUIRE_FALSE(p.exhaustive);
  Partition q = exhaustive_extension(p);
  REQUIRE(q.exhaustive);
  REQUIRE(q.k() == 3);
  // One gluing was needed, lowering the rank by one.
  REQUIRE(q.rank == p.rank - 1);
  REQUIRE_THROWS_AS(exhaustive_extension(q), AlreadyExhaustive);
}

TEST_CASE("1-partition of one edge of a 2-edge path extends to the path") {
  MetricGraph g = catalog::path({1.0, 1.0});
  int mid = g.vertex_of({0, End::Target});
  CutRelation rel = maximal_cut(g, {mid});
  Partition p = partition_from_cut(g, rel, {{0}});
  REQUIRE_FALSE(p.exhaustive);
  Partition q = exhaustive_extension(p);
  REQUIRE(q.exhaustive);
  REQUIRE(q.k() == 1);
  REQUIRE(q.rank == 0);
  REQUIRE(q.clusters[0].edge_count() == 2);
}

TEST_CASE("cluster classification on a 3-edge path") {
  MetricGraph g = catalog::path({1.0, 1.0, 1.0});
  int v1 = g.vertex_of({0, End::Target});
  int v2 = g.vertex_of({1, End::Target});
  CutRelation rel = maximal_cut(g, {v1, v2});
  Partition p = partition_all_components(g, rel);
  REQUIRE(p.k() == 3);
  int benign = 0, with_leaf = 0;
  for (int i = 0; i < p.k(); ++i) {
    ClusterClass c = classify_cluster(p, i);
    benign += c.benign;
    with_leaf += c.contains_leaf;
    REQUIRE_FALSE(c.contains_cycle);
  }
  REQUIRE(benign == 1);     // the middle cluster
  REQUIRE(with_leaf == 2);  // both end clusters contain a host leaf
}

TEST_CASE("cluster containing a loop of the host is malign") {
  MetricGraph g = catalog::lasso(1.0, 1.0);
  // Cut the lasso at the loop base so the pendant separates from the loop.
  int base = center_of(g);
  const Vertex& v = g.vertex(base);
  // Blocks: loop endpoints together, stick endpoint alone.
  Vertex loop_block, stick_block;
  for (const EndpointRef& p : v)
    (p.edge == 0 ? loop_block : stick_block).push_back(p);
  CutRelation rel = split_vertex(g, base, {loop_block, stick_block});
  Partition p = partition_all_components(g, rel);
  REQUIRE(p.k() == 2);
  int cycles = 0, leaves = 0;
  for (int i = 0; i < p.k(); ++i) {
    ClusterClass c = classify_cluster(p, i);
    cycles += c.contains_cycle;
    leaves += c.contains_leaf;
  }
  REQUIRE(cycles == 1);
  REQUIRE(leaves == 1);
  REQUIRE(malign_count(p) == 2);
}

TEST_CASE("an opened loop does not contain a cycle of the host") {
  MetricGraph g = catalog::loop(1.0);
  CutRelation rel = maximal_cut(g, {0});
  Partition p = partition_all_components(g, rel);
  REQUIRE(p.k() == 1);
  REQUIRE_FALSE(classify_cluster(p, 0).contains_cycle);
  REQUIRE(classify_cluster(p, 0).benign);
}

TEST_CASE("rank bounds for exhaustive partitions") {
  SECTION("tree host: rank is exactly k-1") {
    MetricGraph g = catalog::star(3);
    CutRelation rel = maximal_cut(g, {center_of(g)});
    Partition p = partition_all_components(g, rel);
    REQUIRE(p.rank == p.k() - 1);
    REQUIRE(rank_bounds_check(p));
  }
  SECTION("loop host, k = 2 hits k-1+beta") {
    MetricGraph g = catalog::loop(1.0);
    auto s1 = subdivide_ex(g, 0, 0.25);
    auto s2 = subdivide_ex(s1.graph, s1.right, 0.5);
    MetricGraph h = s2.graph;
    CutRelation rel = maximal_cut(h, {h.vertex_of({s1.left, End::Target}),
                                      h.vertex_of({s2.left, End::Target})});
    Partition p = partition_all_components(h, rel);
    REQUIRE(p.k() == 2);
    REQUIRE(p.rank == 2);
    REQUIRE(rank_bounds_check(p));
  }
  SECTION("trivial 1-partition has rank 0") {
    MetricGraph g = catalog::windmill(1);
    Partition p = partition_all_components(g, identity_relation(g));
    REQUIRE(p.k() == 1);
    REQUIRE(p.rank == 0);
    REQUIRE(rank_bounds_check(p));
  }
}

TEST_CASE("enumerate_partitions counts") {
  SECTION("interval, k=2, M=2: only the midpoint cut") {
    auto ps = enumerate_partitions(catalog::interval(1.0), 2, 2);
    REQUIRE(ps.size() == 1);
    REQUIRE(ps[0].exhaustive);
    REQUIRE(ps[0].k() == 2);
  }
  SECTION("loop, k=2, M=4: C(4,2) = 6 cut-point pairs") {
    auto ps = enumerate_partitions(catalog::loop(1.0), 2, 4);
    REQUIRE(ps.size() == 6);
  }
  SECTION("3-star, k=2, M=1: the three 2-block center groupings") {
    auto ps = enumerate_partitions(catalog::star(3), 2, 1);
    REQUIRE(ps.size() == 3);
  }
  SECTION("all enumerated partitions satisfy the invariants") {
    for (const Partition& p : enumerate_partitions(catalog::lasso(), 3, 2)) {
      REQUIRE(p.exhaustive);
      REQUIRE(p.k() == 3);
      REQUIRE(rank_bounds_check(p));
      REQUIRE(malign_cap_check(p));
      std::size_t edges = 0;
      for (const MetricGraph& c : p.clusters) edges += c.edge_count();
      REQUIRE(edges == static_cast<std::size_t>(p.host.edge_count()));
    }
  }
}

TEST_CASE("benign clusters are trees with boundary leaves") {
  for (const Partition& p : enumerate_partitions(catalog::lasso(), 2, 4)) {
    for (int i = 0; i < p.k(); ++i) {
      if (!classify_cluster(p, i).benign) continue;
      const MetricGraph& c = p.clusters[i];
      REQUIRE(topology(c).betti == 0);
      for (int v = 0; v < c.vertex_count(); ++v) {
        if (c.degree(v) != 1) continue;
        bool boundary = std::find(p.cluster_boundaries[i].begin(),
                                  p.cluster_boundaries[i].end(),
                                  v) != p.cluster_boundaries[i].end();
        REQUIRE(boundary);
      }
    }
  }
}

TEST_CASE("rigidity: extra cut in a cluster interior is not rigid") {
  MetricGraph g = catalog::loop(1.0);
  // k=1 partition of the opened loop: cut set {v}, boundary set empty.
  Partition p = partition_all_components(g, maximal_cut(g, {0}));
  REQUIRE_FALSE(p.rigid);
  // k=2 partition of an interval at its midpoint: cut set = boundary set.
  auto q = enumerate_partitions(catalog::interval(1.0), 2, 2);
  REQUIRE(q[0].rigid);
}
