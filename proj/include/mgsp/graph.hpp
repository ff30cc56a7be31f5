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
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "mgsp/common.hpp"

namespace mgsp {

using EdgeId = std::int32_t;

enum class End : std::uint8_t { Source = 0, Target = 1 };

inline End opposite(End e) { return e == End::Source ? End::Target : End::Source; }

/// One of the two endpoints of an edge interval.
struct EndpointRef {
  EdgeId edge = -1;
  End end = End::Source;

  friend bool operator==(const EndpointRef& a, const EndpointRef& b) {
    return a.edge == b.edge && a.end == b.end;
  }
  friend bool operator<(const EndpointRef& a, const EndpointRef& b) {
    if (a.edge != b.edge) return a.edge < b.edge;
    return static_cast<int>(a.end) < static_cast<int>(b.end);
  }
};

/// An edge is a closed interval [0, length]. Edges created by subdividing
/// keep provenance into the pre-subdivision graph: this edge covers
/// [source_offset, source_offset + length] of the ancestral edge source_id.
struct Edge {
  EdgeId id = -1;
  double length = 0.0;
  EdgeId source_id = -1;
  double source_offset = 0.0;

  friend bool operator==(const Edge& a, const Edge& b) {
    return a.id == b.id && a.length == b.length;
  }
};

/// A vertex is a set of endpoints; kept sorted.
using Vertex = std::vector<EndpointRef>;

/// Compact metric graph: a finite multiset of intervals glued by a set
/// partition of their 2|E| endpoints. Values are immutable after
/// construction; all surgery returns new graphs.
class MetricGraph {
 public:
  MetricGraph() = default;

  /// Validating constructor. Throws NonPositiveLength or
  /// EndpointMissingOrDuplicated.
  MetricGraph(std::vector<Edge> edges, std::vector<Vertex> vertices)
      : edges_(std::move(edges)), vertices_(std::move(vertices)) {
    normalize();
    validate();
    index();
  }

  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<Vertex>& vertices() const { return vertices_; }

  int edge_count() const { return static_cast<int>(edges_.size()); }
  int vertex_count() const { return static_cast<int>(vertices_.size()); }

  const Edge& edge(EdgeId id) const {
    auto it = edge_index_.find(id);
    if (it == edge_index_.end()) throw UnknownVertex("no edge with id " + std::to_string(id));
    return edges_[it->second];
  }
  bool has_edge(EdgeId id) const { return edge_index_.count(id) != 0; }

  const Vertex& vertex(int i) const { return vertices_.at(i); }
  int degree(int i) const { return static_cast<int>(vertices_.at(i).size()); }

  /// Index of the vertex containing the given endpoint.
  int vertex_of(const EndpointRef& p) const {
    auto it = vertex_index_.find(p);
    if (it == vertex_index_.end())
      throw UnknownVertex("endpoint not in graph");
    return it->second;
  }

  double total_length() const {
    double s = 0;
    for (const Edge& e : edges_) s += e.length;
    return s;
  }

  /// Component id per vertex, ids numbered 0..c-1 in order of first vertex.
  std::vector<int> vertex_components() const {
    std::vector<int> parent(vertices_.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (const Edge& e : edges_) {
      int a = find(vertex_of({e.id, End::Source}));
      int b = find(vertex_of({e.id, End::Target}));
      if (a != b) parent[b] = a;
    }
    std::vector<int> comp(vertices_.size(), -1);
    int next = 0;
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
      int r = find(static_cast<int>(i));
      if (comp[r] < 0) comp[r] = next++;
      comp[i] = comp[r];
    }
    return comp;
  }

  int component_count() const {
    if (vertices_.empty()) return 0;
    auto comp = vertex_components();
    return 1 + *std::max_element(comp.begin(), comp.end());
  }

  bool connected() const { return component_count() <= 1; }

  /// Smallest edge id not in use.
  EdgeId fresh_edge_id() const {
    EdgeId m = 0;
    for (const Edge& e : edges_) m = std::max(m, e.id + 1);
    return m;
  }

  friend bool operator==(const MetricGraph& a, const MetricGraph& b) {
    return a.edges_ == b.edges_ && a.vertices_ == b.vertices_;
  }

 private:
  void normalize() {
    std::sort(edges_.begin(), edges_.end(),
              [](const Edge& a, const Edge& b) { return a.id < b.id; });
    for (Vertex& v : vertices_) std::sort(v.begin(), v.end());
    std::sort(vertices_.begin(), vertices_.end());
  }

  void validate() const {
    for (const Edge& e : edges_) {
      if (!(e.length > 0) || !std::isfinite(e.length))
        throw NonPositiveLength("edge " + std::to_string(e.id));
    }
    for (std::size_t i = 0; i + 1 < edges_.size(); ++i)
      if (edges_[i].id == edges_[i + 1].id)
        throw EndpointMissingOrDuplicated("duplicate edge id " +
                                          std::to_string(edges_[i].id));
    std::vector<EndpointRef> seen;
    for (const Vertex& v : vertices_) {
      if (v.empty()) throw EndpointMissingOrDuplicated("empty vertex");
      for (const EndpointRef& p : v) seen.push_back(p);
    }
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end())
      throw EndpointMissingOrDuplicated("endpoint in two vertices");
    if (seen.size() != 2 * edges_.size())
      throw EndpointMissingOrDuplicated("endpoint count mismatch");
    for (const Edge& e : edges_) {
      EndpointRef s{e.id, End::Source}, t{e.id, End::Target};
      if (!std::binary_search(seen.begin(), seen.end(), s) ||
          !std::binary_search(seen.begin(), seen.end(), t))
        throw EndpointMissingOrDuplicated("edge " + std::to_string(e.id) +
                                          " endpoint not covered");
    }
  }

  void index() {
    edge_index_.clear();
    vertex_index_.clear();
    for (std::size_t i = 0; i < edges_.size(); ++i) edge_index_[edges_[i].id] = static_cast<int>(i);
    for (std::size_t i = 0; i < vertices_.size(); ++i)
      for (const EndpointRef& p : vertices_[i]) vertex_index_[p] = static_cast<int>(i);
  }

  std::vector<Edge> edges_;
  std::vector<Vertex> vertices_;
  std::map<EdgeId, int> edge_index_;
  std::map<EndpointRef, int> vertex_index_;
};

struct GraphTopology {
  int betti = 0;
  int leaves = 0;
  double total_length = 0;
  int components = 0;
};

/// Builds and validates a metric graph from (id, length) pairs and the
/// endpoint partition.
inline MetricGraph build_graph(const std::vector<std::pair<EdgeId, double>>& edges,
                               std::vector<Vertex> vertices) {
  std::vector<Edge> es;
  es.reserve(edges.size());
  for (auto& [id, len] : edges) es.push_back(Edge{id, len, id, 0.0});
  return MetricGraph(std::move(es), std::move(vertices));
}

/// Betti number, leaf count, total length and component count. For
/// disconnected graphs betti = |E| - |V| + c, the sum of per-component
/// Betti numbers.
inline GraphTopology topology(const MetricGraph& g) {
  GraphTopology t;
  t.components = g.component_count();
  t.betti = g.edge_count() - g.vertex_count() + t.components;
  for (int i = 0; i < g.vertex_count(); ++i)
    if (g.degree(i) == 1) ++t.leaves;
  t.total_length = g.total_length();
  return t;
}

struct SubdivideResult {
  MetricGraph graph;
  EdgeId left = -1;    // covers [0, t] of the old edge
  EdgeId right = -1;   // covers [t, length]
  int dummy_vertex = -1;
};

/// Replaces edge `id` by two edges of lengths t and length-t joined at a new
/// degree-2 dummy vertex. Total length and Betti number are preserved.
inline SubdivideResult subdivide_ex(const MetricGraph& g, EdgeId id, double t) {
  const Edge& e = g.edge(id);
  if (!(t > 0) || !(t < e.length))
    throw PositionOutOfRange("t=" + std::to_string(t) + " on edge of length " +
                             std::to_string(e.length));
  EdgeId l = g.fresh_edge_id(), r = l + 1;
  std::vector<Edge> edges;
  for (const Edge& f : g.edges())
    if (f.id != id) edges.push_back(f);
  edges.push_back(Edge{l, t, e.source_id, e.source_offset});
  edges.push_back(Edge{r, e.length - t, e.source_id, e.source_offset + t});
  std::vector<Vertex> vertices = g.vertices();
  for (Vertex& v : vertices)
    for (EndpointRef& p : v) {
      if (p.edge == id && p.end == End::Source) p = {l, End::Source};
      else if (p.edge == id && p.end == End::Target) p = {r, End::Target};
    }
  vertices.push_back(Vertex{{l, End::Target}, {r, End::Source}});
  SubdivideResult res{MetricGraph(std::move(edges), std::move(vertices)), l, r, -1};
  res.dummy_vertex = res.graph.vertex_of({l, End::Target});
  return res;
}

inline MetricGraph subdivide(const MetricGraph& g, EdgeId id, double t) {
  return subdivide_ex(g, id, t).graph;
}

/// Merges the two edges meeting at a degree-2 vertex; inverse of subdivide.
/// The vertex must not be the base of a loop.
inline MetricGraph smooth(const MetricGraph& g, int vertex_index) {
  const Vertex& v = g.vertex(vertex_index);
  if (v.size() != 2) throw NotDegreeTwo("vertex has degree " + std::to_string(v.size()));
  EndpointRef p = v[0], q = v[1];
  if (p.edge == q.edge) throw LoopBase();
  const Edge& ep = g.edge(p.edge);
  const Edge& eq = g.edge(q.edge);
  // Orient the merge as first -> v -> second; flip edges entering with the
  // wrong end. Provenance survives only an unflipped contiguous merge.
  EndpointRef first = p, second = q;
  if (first.end == End::Source && second.end == End::Target) std::swap(first, second);
  const Edge& ef = g.edge(first.edge);
  const Edge& es = g.edge(second.edge);
  bool flip_first = first.end == End::Source;
  bool flip_second = second.end == End::Target;
  EdgeId m = g.fresh_edge_id();
  Edge merged{m, ef.length + es.length, -1, 0.0};
  if (!flip_first && !flip_second && ef.source_id == es.source_id &&
      std::abs(ef.source_offset + ef.length - es.source_offset) <= kLengthTol) {
    merged.source_id = ef.source_id;
    merged.source_offset = ef.source_offset;
  } else {
    merged.source_id = m;
  }
  std::vector<Edge> edges;
  for (const Edge& f : g.edges())
    if (f.id != p.edge && f.id != q.edge) edges.push_back(f);
  edges.push_back(merged);
  // Outer endpoints of the chain become the merged edge's endpoints.
  EndpointRef outer_first{first.edge, opposite(first.end)};
  EndpointRef outer_second{second.edge, opposite(second.end)};
  std::vector<Vertex> vertices;
  for (int i = 0; i < g.vertex_count(); ++i) {
    if (i == vertex_index) continue;
    Vertex nv = g.vertex(i);
    for (EndpointRef& x : nv) {
      if (x == outer_first) x = {m, End::Source};
      else if (x == outer_second) x = {m, End::Target};
    }
    vertices.push_back(std::move(nv));
  }
  return MetricGraph(std::move(edges), std::move(vertices));
}

/// True if the vertex may be removed by smooth().
inline bool smoothable(const MetricGraph& g, int vertex_index) {
  const Vertex& v = g.vertex(vertex_index);
  return v.size() == 2 && v[0].edge != v[1].edge;
}

/// Smooths every smoothable degree-2 vertex.
inline MetricGraph smooth_all(MetricGraph g) {
  for (;;) {
    bool changed = false;
    for (int i = 0; i < g.vertex_count(); ++i) {
      if (smoothable(g, i)) {
        g = smooth(g, i);
        changed = true;
        break;
      }
    }
    if (!changed) return g;
  }
}

namespace detail {

// Signature used to prune the edge-matching backtracking below.
inline std::vector<std::vector<int>> vertex_degrees_of_edges(const MetricGraph& g) {
  std::vector<std::vector<int>> out;
  for (const Edge& e : g.edges()) {
    int a = g.degree(g.vertex_of({e.id, End::Source}));
    int b = g.degree(g.vertex_of({e.id, End::Target}));
    out.push_back({std::min(a, b), std::max(a, b)});
  }
  return out;
}

inline bool isomorphic_exact(const MetricGraph& a, const MetricGraph& b) {
  int n = a.edge_count();
  if (n != b.edge_count() || a.vertex_count() != b.vertex_count()) return false;
  // Map edges of a to edges of b with an orientation each, preserving
  // lengths and the vertex partition.
  std::vector<int> map_edge(n, -1);   // index into b.edges()
  std::vector<int> map_flip(n, 0);
  std::vector<bool> used(n, false);
  std::vector<int> vmap(a.vertex_count(), -1);  // a vertex -> b vertex
  std::vector<int> vref(a.vertex_count(), 0);   // how many assignments pin vmap
  auto adeg = vertex_degrees_of_edges(a);
  auto bdeg = vertex_degrees_of_edges(b);

  // Endpoint translation under a candidate assignment.
  auto translate = [&](EndpointRef p) -> EndpointRef {
    int ei = -1;
    for (int i = 0; i < n; ++i)
      if (a.edges()[i].id == p.edge) { ei = i; break; }
    End e = p.end;
    if (map_flip[ei]) e = opposite(e);
    return {b.edges()[map_edge[ei]].id, e};
  };

  std::function<bool(int)> go = [&](int i) -> bool {
    if (i == n) return true;
    for (int j = 0; j < n; ++j) {
      if (used[j]) continue;
      if (std::abs(a.edges()[i].length - b.edges()[j].length) > kLengthTol) continue;
      if (adeg[i] != bdeg[j]) continue;
      for (int flip = 0; flip < 2; ++flip) {
        map_edge[i] = j;
        map_flip[i] = flip;
        used[j] = true;
        // Check vertex consistency for both endpoints of edge i.
        bool ok = true;
        std::vector<int> pinned;
        for (End end : {End::Source, End::Target}) {
          EndpointRef pa{a.edges()[i].id, end};
          int va = a.vertex_of(pa);
          int vb = b.vertex_of(translate(pa));
          if (vmap[va] < 0) {
            if (a.degree(va) != b.degree(vb)) { ok = false; break; }
            // vb must not already be the image of another a-vertex.
            for (int w = 0; w < a.vertex_count(); ++w)
              if (vmap[w] == vb) { ok = false; break; }
            if (!ok) break;
            vmap[va] = vb;
            pinned.push_back(va);
          } else if (vmap[va] != vb) {
            ok = false;
            break;
          }
        }
        if (ok && go(i + 1)) return true;
        for (int w : pinned) vmap[w] = -1;
        used[j] = false;
        map_edge[i] = -1;
      }
    }
    return false;
  };
  return go(0);
}

}  // namespace detail

/// Exact isometric isomorphism after smoothing all dummy vertices.
/// Backtracking; desk scale only.
inline bool is_isomorphic_up_to_dummies(const MetricGraph& g1, const MetricGraph& g2,
                                        int max_edges = 12) {
  MetricGraph a = smooth_all(g1);
  MetricGraph b = smooth_all(g2);
  if (a.edge_count() > max_edges || b.edge_count() > max_edges)
    throw SizeLimitExceeded("isomorphism check limited to " +
                            std::to_string(max_edges) + " edges");
  return detail::isomorphic_exact(a, b);
}

}  // namespace mgsp
