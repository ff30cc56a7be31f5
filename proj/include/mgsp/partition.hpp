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

#include "mgsp/surgery.hpp"

namespace mgsp {

/// Subgraph induced by one connected component (`comp` as returned by
/// vertex_components()).
inline MetricGraph component_subgraph(const MetricGraph& g, const std::vector<int>& comp,
                                      int c) {
  std::vector<Edge> edges;
  std::vector<Vertex> vertices;
  for (int i = 0; i < g.vertex_count(); ++i)
    if (comp[i] == c) vertices.push_back(g.vertex(i));
  for (const Edge& e : g.edges())
    if (comp[g.vertex_of({e.id, End::Source})] == c) edges.push_back(e);
  return MetricGraph(std::move(edges), std::move(vertices));
}

/// A k-partition: k clusters chosen among the connected components of a cut
/// of the host, together with the minimal cut graph producing them.
struct Partition {
  MetricGraph host;
  CutRelation minimal_cut;              // host -> minimal cut graph
  std::vector<MetricGraph> clusters;    // the selected components
  std::vector<int> boundary_vertices;   // boundary set of the partition (host indices)
  // Per cluster, indices into clusters[i].vertices() of vertices strictly
  // contained in a host cut vertex. These carry the Dirichlet set of the
  // cluster in the D energy.
  std::vector<std::vector<int>> cluster_boundaries;
  bool exhaustive = false;
  bool rigid = false;
  int rank = 0;

  int k() const { return static_cast<int>(clusters.size()); }
};

namespace detail {

inline std::vector<int> cluster_boundary_indices(const MetricGraph& host,
                                                 const MetricGraph& cluster) {
  std::vector<int> out;
  for (int i = 0; i < cluster.vertex_count(); ++i) {
    const Vertex& v = cluster.vertex(i);
    const Vertex& hv = host.vertex(host.vertex_of(v[0]));
    if (v.size() < hv.size()) out.push_back(i);
  }
  return out;
}

inline Partition assemble_partition(const MetricGraph& host, CutRelation minimal,
                                    const std::vector<int>& selected_components) {
  Partition p{host, std::move(minimal), {}, {}, {}, false, false, 0};
  const MetricGraph& cut = p.minimal_cut.cut();
  auto comp = cut.vertex_components();
  std::set<EdgeId> used;
  // Which clusters touch each host vertex, to extract the boundary set.
  std::map<int, std::set<int>> touching;
  for (std::size_t ci = 0; ci < selected_components.size(); ++ci) {
    int c = selected_components[ci];
    MetricGraph sub = component_subgraph(cut, comp, c);
    for (const Edge& e : sub.edges()) used.insert(e.id);
    for (int i = 0; i < sub.vertex_count(); ++i)
      touching[host.vertex_of(sub.vertex(i)[0])].insert(static_cast<int>(ci));
    p.cluster_boundaries.push_back(cluster_boundary_indices(host, sub));
    p.clusters.push_back(std::move(sub));
  }
  for (auto& [hv, who] : touching)
    if (who.size() >= 2) p.boundary_vertices.push_back(hv);
  p.exhaustive = static_cast<int>(used.size()) == host.edge_count();
  p.rank = p.minimal_cut.rank();
  std::vector<int> cs = p.minimal_cut.cut_set();
  p.rigid = cs == p.boundary_vertices;
  return p;
}

}  // namespace detail

/// Builds the partition whose clusters are the selected connected components
/// of rel.cut(), identified by their exact edge sets. The minimal cut graph
/// is recomputed: cuts outside the selected clusters are undone.
inline Partition partition_from_cut(const MetricGraph& g, const CutRelation& rel,
                                    const std::vector<std::vector<EdgeId>>& cluster_edges) {
  if (!(rel.original() == g))
    throw MismatchedGraphs("relation does not cut this graph");
  if (cluster_edges.empty()) throw EmptySelection();
  const MetricGraph& cut = rel.cut();
  auto comp = cut.vertex_components();
  int ncomp = 1 + *std::max_element(comp.begin(), comp.end());
  std::vector<std::vector<EdgeId>> comp_edges(ncomp);
  for (const Edge& e : cut.edges())
    comp_edges[comp[cut.vertex_of({e.id, End::Source})]].push_back(e.id);
  for (auto& ce : comp_edges) std::sort(ce.begin(), ce.end());

  std::vector<int> selected;
  std::set<int> taken;
  for (const std::vector<EdgeId>& want0 : cluster_edges) {
    std::vector<EdgeId> want = want0;
    std::sort(want.begin(), want.end());
    int found = -1;
    for (int c = 0; c < ncomp; ++c)
      if (comp_edges[c] == want) { found = c; break; }
    if (found < 0) throw NotAComponent("edge set is not a component of the cut");
    if (!taken.insert(found).second) throw NotAComponent("component selected twice");
    selected.push_back(found);
  }

  // Minimal cut graph: keep the vertices of the selected components; all
  // remaining endpoints of each host vertex merge back into one vertex.
  std::vector<bool> vertex_selected(cut.vertex_count(), false);
  for (int i = 0; i < cut.vertex_count(); ++i)
    if (taken.count(comp[i])) vertex_selected[i] = true;
  std::vector<Vertex> vp;
  for (int i = 0; i < cut.vertex_count(); ++i)
    if (vertex_selected[i]) vp.push_back(cut.vertex(i));
  for (int hv = 0; hv < g.vertex_count(); ++hv) {
    Vertex rest;
    for (const EndpointRef& p : g.vertex(hv)) {
      if (!vertex_selected[cut.vertex_of(p)]) rest.push_back(p);
    }
    if (!rest.empty()) vp.push_back(std::move(rest));
  }
  CutRelation minimal(g, MetricGraph(g.edges(), std::move(vp)));

  // Re-locate the selected clusters inside the minimal cut graph.
  const MetricGraph& mcut = minimal.cut();
  auto mcomp = mcut.vertex_components();
  std::vector<int> msel;
  std::set<int> mseen;
  for (int c : selected) {
    // The component of the minimal cut containing the selected component's
    // first vertex; by the minimality construction it coincides with it.
    int v0 = -1;
    for (int i = 0; i < cut.vertex_count(); ++i)
      if (comp[i] == c) { v0 = i; break; }
    int mc = mcomp[mcut.vertex_of(cut.vertex(v0)[0])];
    if (!mseen.insert(mc).second) throw NotAComponent("selected clusters are connected to each other");
    msel.push_back(mc);
  }
  return detail::assemble_partition(g, std::move(minimal), msel);
}

/// Exhaustive partition made of all components of the cut.
inline Partition partition_all_components(const MetricGraph& g, const CutRelation& rel) {
  const MetricGraph& cut = rel.cut();
  auto comp = cut.vertex_components();
  int ncomp = 1 + *std::max_element(comp.begin(), comp.end());
  std::vector<std::vector<EdgeId>> sel(ncomp);
  for (const Edge& e : cut.edges())
    sel[comp[cut.vertex_of({e.id, End::Source})]].push_back(e.id);
  return partition_from_cut(g, rel, sel);
}

/// Repeatedly glues an unselected component of the minimal cut graph to a
/// neighboring cluster at a single boundary vertex until every edge is used.
/// Preserves k and lowers the rank by one per gluing.
inline Partition exhaustive_extension(const Partition& p) {
  if (p.exhaustive) throw AlreadyExhaustive();
  MetricGraph host = p.host;
  MetricGraph cut = p.minimal_cut.cut();
  std::vector<std::vector<EdgeId>> cluster_edges;
  for (const MetricGraph& c : p.clusters) {
    std::vector<EdgeId> ids;
    for (const Edge& e : c.edges()) ids.push_back(e.id);
    cluster_edges.push_back(std::move(ids));
  }
  for (;;) {
    auto comp = cut.vertex_components();
    // Mark components that are clusters.
    std::map<int, int> comp_of_cluster;  // component -> cluster index
    for (std::size_t ci = 0; ci < cluster_edges.size(); ++ci) {
      EdgeId e0 = cluster_edges[ci][0];
      comp_of_cluster[comp[cut.vertex_of({e0, End::Source})]] = static_cast<int>(ci);
    }
    std::set<EdgeId> used;
    for (auto& ce : cluster_edges) used.insert(ce.begin(), ce.end());
    if (static_cast<int>(used.size()) == host.edge_count()) break;
    // Find a host vertex joining a cluster vertex and an unselected
    // component's vertex; glue those two cut vertices.
    int va = -1, vb = -1, cluster = -1;
    for (int hv = 0; hv < host.vertex_count() && va < 0; ++hv) {
      int in_cluster = -1, outside = -1, which = -1;
      for (const EndpointRef& pt : host.vertex(hv)) {
        int cv = cut.vertex_of(pt);
        auto it = comp_of_cluster.find(comp[cv]);
        if (it != comp_of_cluster.end()) {
          if (in_cluster < 0) { in_cluster = cv; which = it->second; }
        } else {
          if (outside < 0) outside = cv;
        }
      }
      if (in_cluster >= 0 && outside >= 0) {
        va = in_cluster;
        vb = outside;
        cluster = which;
      }
    }
    if (va < 0) throw Error("exhaustive_extension: host is disconnected");
    int target_comp = comp[vb];
    for (const Edge& e : cut.edges())
      if (comp[cut.vertex_of({e.id, End::Source})] == target_comp)
        cluster_edges[cluster].push_back(e.id);
    cut = glue(cut, {va, vb}).first;
  }
  CutRelation rel(host, cut);
  return partition_from_cut(host, rel, cluster_edges);
}

struct ClusterClass {
  bool benign = true;
  bool contains_leaf = false;
  bool contains_cycle = false;
};

/// A cluster is malign if it contains a degree-one vertex of the host or an
/// uncut cycle of the host; otherwise benign.
inline ClusterClass classify_cluster(const Partition& p, int i) {
  const MetricGraph& c = p.clusters.at(i);
  ClusterClass out;
  for (int v = 0; v < c.vertex_count(); ++v) {
    int hv = p.host.vertex_of(c.vertex(v)[0]);
    if (p.host.degree(hv) == 1) out.contains_leaf = true;
  }
  if (topology(c).betti >= 1) out.contains_cycle = true;
  out.benign = !out.contains_leaf && !out.contains_cycle;
  return out;
}

inline int malign_count(const Partition& p) {
  int n = 0;
  for (int i = 0; i < p.k(); ++i)
    if (!classify_cluster(p, i).benign) ++n;
  return n;
}

/// Rank estimate for exhaustive partitions: k-1 <= rank <= k-1+beta.
inline bool rank_bounds_check(const Partition& p) {
  int beta = topology(p.host).betti;
  return p.rank >= p.k() - 1 && p.rank <= p.k() - 1 + beta;
}

/// Cap on the number of malign clusters of an exhaustive partition of rank
/// k-1+r: at most beta + |V1| - r.
inline bool malign_cap_check(const Partition& p) {
  GraphTopology t = topology(p.host);
  int r = p.rank - (p.k() - 1);
  return malign_count(p) <= t.betti + t.leaves - r;
}

}  // namespace mgsp
