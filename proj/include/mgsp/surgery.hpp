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

#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "mgsp/graph.hpp"

namespace mgsp {

/// Witness that `cut` is a cut graph of `original`: both share the edge set
/// and every cut vertex is contained in an original vertex. The vertex map
/// and rank are derived on construction, so the invariants cannot be
/// falsified from outside.
class CutRelation {
 public:
  CutRelation() = default;  // empty placeholder relation

  CutRelation(MetricGraph original, MetricGraph cut)
      : original_(std::move(original)), cut_(std::move(cut)) {
    if (original_.edges() != cut_.edges())
      throw MismatchedGraphs("cut must have a common edge set with the original");
    vertex_map_.resize(cut_.vertex_count());
    std::vector<int> preimages(original_.vertex_count(), 0);
    for (int i = 0; i < cut_.vertex_count(); ++i) {
      const Vertex& v = cut_.vertex(i);
      int host = original_.vertex_of(v[0]);
      for (const EndpointRef& p : v)
        if (original_.vertex_of(p) != host)
          throw MismatchedGraphs("cut vertex straddles two original vertices");
      vertex_map_[i] = host;
      ++preimages[host];
    }
    for (int v = 0; v < original_.vertex_count(); ++v)
      if (preimages[v] >= 2) cut_set_.push_back(v);
  }

  const MetricGraph& original() const { return original_; }
  const MetricGraph& cut() const { return cut_; }

  /// For each cut-graph vertex, the index of the original vertex containing it.
  const std::vector<int>& vertex_map() const { return vertex_map_; }

  /// Original vertices that were split.
  const std::vector<int>& cut_set() const { return cut_set_; }

  int rank() const { return cut_.vertex_count() - original_.vertex_count(); }

 private:
  MetricGraph original_;
  MetricGraph cut_;
  std::vector<int> vertex_map_;
  std::vector<int> cut_set_;
};

inline int rank(const CutRelation& rel) { return rel.rank(); }

inline CutRelation identity_relation(const MetricGraph& g) { return CutRelation(g, g); }

/// Builds the cut defined by replacing each listed vertex with the given
/// blocks. Each grouping must partition exactly that vertex's endpoints.
inline CutRelation make_cut(const MetricGraph& g,
                            const std::map<int, std::vector<Vertex>>& groupings) {
  std::vector<Vertex> vertices;
  for (int i = 0; i < g.vertex_count(); ++i) {
    auto it = groupings.find(i);
    if (it == groupings.end()) {
      vertices.push_back(g.vertex(i));
      continue;
    }
    const Vertex& v = g.vertex(i);
    std::vector<EndpointRef> covered;
    for (const Vertex& block : it->second) {
      if (block.empty()) throw InvalidGrouping("empty block");
      for (const EndpointRef& p : block) covered.push_back(p);
      vertices.push_back(block);
    }
    std::sort(covered.begin(), covered.end());
    if (covered != v) throw InvalidGrouping("blocks do not partition the vertex");
  }
  return CutRelation(g, MetricGraph(g.edges(), std::move(vertices)));
}

/// Splits one vertex into the given blocks (>= 2). The returned relation has
/// rank = #blocks - 1; with 2 blocks this is a simple cut.
inline CutRelation split_vertex(const MetricGraph& g, int vertex_index,
                                const std::vector<Vertex>& grouping) {
  if (vertex_index < 0 || vertex_index >= g.vertex_count())
    throw UnknownVertex(std::to_string(vertex_index));
  if (grouping.size() < 2)
    throw InvalidGrouping("need at least 2 blocks, got " +
                          std::to_string(grouping.size()));
  return make_cut(g, {{vertex_index, grouping}});
}

/// Maximal cut at a vertex set: each vertex of degree d becomes d vertices of
/// degree one; rank = sum (d_v - 1).
inline CutRelation maximal_cut(const MetricGraph& g, const std::vector<int>& vertex_set) {
  std::map<int, std::vector<Vertex>> groupings;
  for (int v : vertex_set) {
    if (v < 0 || v >= g.vertex_count()) throw UnknownVertex(std::to_string(v));
    if (g.degree(v) < 2) continue;  // nothing to split
    std::vector<Vertex> blocks;
    for (const EndpointRef& p : g.vertex(v)) blocks.push_back(Vertex{p});
    groupings[v] = std::move(blocks);
  }
  return make_cut(g, groupings);
}

/// Lemma on rank additivity: if rel12 witnesses G1 cut of G2 and rel23
/// witnesses G2 cut of G3, the composition witnesses G1 cut of G3 with
/// rank = rank12 + rank23.
inline CutRelation compose(const CutRelation& rel12, const CutRelation& rel23) {
  if (!(rel12.original() == rel23.cut()))
    throw MismatchedGraphs("compose: rel12.original != rel23.cut");
  return CutRelation(rel23.original(), rel12.cut());
}

enum class SplitStrategy { FirstBlock, LastBlock };

/// Decomposes a rank-r cut into exactly r simple cuts whose composition
/// equals the relation; rank 0 yields an empty list. The constructive proof
/// is the algorithm: repeatedly split off one final block of one cut vertex.
inline std::vector<CutRelation> simple_cut_sequence(
    const CutRelation& rel, SplitStrategy strategy = SplitStrategy::FirstBlock) {
  std::vector<CutRelation> seq;
  MetricGraph current = rel.original();
  const MetricGraph& target = rel.cut();
  for (;;) {
    // Final blocks inside each current vertex.
    int split_vertex_index = -1;
    std::vector<Vertex> blocks;
    for (int i = 0; i < current.vertex_count(); ++i) {
      const Vertex& v = current.vertex(i);
      std::set<int> finals;
      for (const EndpointRef& p : v) finals.insert(target.vertex_of(p));
      if (finals.size() >= 2) {
        split_vertex_index = i;
        for (int f : finals) blocks.push_back(target.vertex(f));
        break;
      }
    }
    if (split_vertex_index < 0) break;
    const Vertex& v = current.vertex(split_vertex_index);
    const Vertex& off = strategy == SplitStrategy::FirstBlock ? blocks.front() : blocks.back();
    Vertex rest;
    for (const EndpointRef& p : v)
      if (!std::binary_search(off.begin(), off.end(), p)) rest.push_back(p);
    CutRelation step = split_vertex(current, split_vertex_index, {off, rest});
    current = step.cut();
    seq.push_back(std::move(step));
  }
  return seq;
}

/// Merges >= 2 vertices into one. Returns the glued graph together with the
/// relation in which the input graph is the cut.
inline std::pair<MetricGraph, CutRelation> glue(const MetricGraph& g,
                                                const std::vector<int>& vertices_to_merge) {
  std::set<int> merge(vertices_to_merge.begin(), vertices_to_merge.end());
  if (merge.size() < 2)
    throw TooFewVertices("glue needs at least 2 distinct vertices");
  for (int v : merge)
    if (v < 0 || v >= g.vertex_count()) throw UnknownVertex(std::to_string(v));
  Vertex big;
  std::vector<Vertex> vertices;
  for (int i = 0; i < g.vertex_count(); ++i) {
    if (merge.count(i))
      for (const EndpointRef& p : g.vertex(i)) big.push_back(p);
    else
      vertices.push_back(g.vertex(i));
  }
  vertices.push_back(std::move(big));
  MetricGraph glued(g.edges(), std::move(vertices));
  CutRelation rel(glued, g);
  return {std::move(glued), std::move(rel)};
}

/// Lemma: a cut of rank >= beta + 1 of a connected graph is disconnected.
/// Returns whether the implication holds for this relation.
inline bool check_betti_disconnection(const MetricGraph& g, const CutRelation& rel) {
  int beta = topology(g).betti;
  if (rel.rank() < beta + 1) return true;
  return !rel.cut().connected();
}

/// Subdivides the shared edge `id` at position t in both graphs of the
/// relation, preserving the cut structure. The new dummy vertex of the cut
/// graph maps onto the new dummy of the original.
inline CutRelation subdivide_relation(const CutRelation& rel, EdgeId id, double t) {
  MetricGraph orig = subdivide(rel.original(), id, t);
  MetricGraph cut = subdivide(rel.cut(), id, t);
  return CutRelation(std::move(orig), std::move(cut));
}

}  // namespace mgsp
