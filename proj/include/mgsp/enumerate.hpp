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
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "mgsp/energy.hpp"
#include "mgsp/partition.hpp"

namespace mgsp {

namespace detail {

/// All set partitions of {0..n-1} with at most max_blocks blocks, via
/// restricted growth strings; identity (one block) first, then by block
/// count, then lexicographically.
inline std::vector<std::vector<std::vector<int>>> set_partitions(int n, int max_blocks) {
  std::vector<std::vector<std::vector<int>>> out;
  std::vector<int> rgs(n, 0);
  for (;;) {
    int nb = n ? 1 + *std::max_element(rgs.begin(), rgs.end()) : 0;
    if (nb <= max_blocks) {
      std::vector<std::vector<int>> blocks(nb);
      for (int i = 0; i < n; ++i) blocks[rgs[i]].push_back(i);
      out.push_back(std::move(blocks));
    }
    // next restricted growth string
    int i = n - 1;
    for (; i > 0; --i) {
      int cap = *std::max_element(rgs.begin(), rgs.begin() + i) + 1;
      if (rgs[i] < cap) {
        ++rgs[i];
        std::fill(rgs.begin() + i + 1, rgs.end(), 0);
        break;
      }
      }
    if (i == 0) break;
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.size() < b.size(); });
  return out;
}

/// Per-vertex grouping menus. Vertices of degree >= 6 are restricted to
/// 2-block groupings (Bell-number blowup); `truncated` reports that.
struct GroupingMenus {
  std::vector<std::vector<std::vector<std::vector<int>>>> by_vertex;
  bool truncated = false;
};

inline GroupingMenus grouping_menus(const MetricGraph& g, int max_block_splits) {
  GroupingMenus m;
  for (int v = 0; v < g.vertex_count(); ++v) {
    int d = g.degree(v);
    int cap = std::min(max_block_splits, d);
    if (d >= 6) {
      m.truncated = true;
      cap = std::min(cap, 2);
    }
    m.by_vertex.push_back(set_partitions(d, cap));
  }
  return m;
}

/// One combinatorial cut configuration: a grouping choice per vertex plus a
/// cut count per edge (positions come later).
struct Structure {
  std::vector<int> choice;  // index into menus.by_vertex[v]
  std::vector<int> cuts;    // per edge (position in g.edges())
  int rank = 0;
  int brank = 0;  // rank contributed by vertex groupings
  double bound = 0;  // optimistic lower bound on the energy objective
};

struct BlockModel {
  std::vector<std::vector<Vertex>> blocks;  // per vertex, endpoint blocks
  std::vector<int> block_comp;              // component per global block id
  std::vector<int> first_block;             // global id of vertex v's first block
  int ncomp_blocks = 0;
  int total_comps = 0;  // incl. middle fragments

  int block_of(const MetricGraph& g, const EndpointRef& p) const {
    int v = g.vertex_of(p);
    const Vertex& vert = g.vertex(v);
    for (std::size_t b = 0; b < blocks[v].size(); ++b)
      for (const EndpointRef& q : blocks[v][b])
        if (q == p) return first_block[v] + static_cast<int>(b);
    (void)vert;
    throw Error("endpoint not in any block");
  }
};

inline BlockModel block_model(const MetricGraph& g, const GroupingMenus& menus,
                              const std::vector<int>& choice, const std::vector<int>& cuts) {
  BlockModel bm;
  int nb = 0;
  for (int v = 0; v < g.vertex_count(); ++v) {
    const auto& part = menus.by_vertex[v][choice[v]];
    std::vector<Vertex> bl;
    for (const auto& idxs : part) {
      Vertex block;
      for (int i : idxs) block.push_back(g.vertex(v)[i]);
      bl.push_back(std::move(block));
    }
    bm.first_block.push_back(nb);
    nb += static_cast<int>(bl.size());
    bm.blocks.push_back(std::move(bl));
  }
  std::vector<int> parent(nb);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int ei = 0; ei < g.edge_count(); ++ei) {
    if (cuts[ei] > 0) continue;
    const Edge& e = g.edges()[ei];
    int a = find(bm.block_of(g, {e.id, End::Source}));
    int b = find(bm.block_of(g, {e.id, End::Target}));
    if (a != b) parent[b] = a;
  }
  bm.block_comp.assign(nb, -1);
  int next = 0;
  for (int i = 0; i < nb; ++i) {
    int r = find(i);
    if (bm.block_comp[r] < 0) bm.block_comp[r] = next++;
    bm.block_comp[i] = bm.block_comp[r];
  }
  bm.ncomp_blocks = next;
  int middles = 0;
  for (int ei = 0; ei < g.edge_count(); ++ei) middles += std::max(0, cuts[ei] - 1);
  bm.total_comps = next + middles;
  return bm;
}

/// True if every cut vertex of the structure is a boundary vertex, i.e. its
/// blocks (or fragment sides) fall in at least two distinct components.
inline bool structure_rigid(const MetricGraph& g, const BlockModel& bm,
                            const std::vector<int>& cuts) {
  for (int v = 0; v < g.vertex_count(); ++v) {
    if (bm.blocks[v].size() < 2) continue;
    int c0 = bm.block_comp[bm.first_block[v]];
    bool mixed = false;
    for (std::size_t b = 1; b < bm.blocks[v].size(); ++b)
      if (bm.block_comp[bm.first_block[v] + static_cast<int>(b)] != c0) mixed = true;
    if (!mixed) return false;
  }
  for (int ei = 0; ei < g.edge_count(); ++ei) {
    if (cuts[ei] == 0) continue;
    if (cuts[ei] >= 2) continue;  // middle fragments are their own clusters
    const Edge& e = g.edges()[ei];
    int a = bm.block_comp[bm.block_of(g, {e.id, End::Source})];
    int b = bm.block_comp[bm.block_of(g, {e.id, End::Target})];
    if (a == b) return false;
  }
  return true;
}

/// Optimistic per-component length budgets: an upper bound on the total
/// length any single cluster of this structure can reach.
inline double structure_bound(const MetricGraph& g, const BlockModel& bm,
                              const std::vector<int>& cuts, EnergyKind kind) {
  int middles = 0;
  for (int c : cuts) middles += std::max(0, c - 1);
  std::vector<double> budget(bm.ncomp_blocks + middles, 0.0);
  int middle = bm.ncomp_blocks;
  for (int ei = 0; ei < g.edge_count(); ++ei) {
    const Edge& e = g.edges()[ei];
    int cs = bm.block_comp[bm.block_of(g, {e.id, End::Source})];
    int ct = bm.block_comp[bm.block_of(g, {e.id, End::Target})];
    if (cuts[ei] == 0) {
      budget[cs] += e.length;  // cs == ct
    } else {
      budget[cs] += e.length;
      if (ct != cs) budget[ct] += e.length;
      for (int j = 1; j < cuts[ei]; ++j) budget[middle++] += e.length;
    }
  }
  double worst = 0;
  for (double s : budget) {
    double lb = kind == EnergyKind::Dirichlet ? M_PI * M_PI / (4 * s * s)
                                              : M_PI * M_PI / (s * s);
    worst = std::max(worst, lb);
  }
  return worst;
}

/// Enumerates every structure with exactly k components, rank within the
/// exhaustive-partition bounds, and at most M-1 cuts per edge.
inline std::vector<Structure> enumerate_structures(const MetricGraph& g,
                                                   const GroupingMenus& menus, int k,
                                                   int mesh, int beta, bool rigid_only,
                                                   EnergyKind kind,
                                                   long long cap = 2'000'000) {
  int nv = g.vertex_count(), ne = g.edge_count();
  int rank_hi = k - 1 + beta;
  std::vector<Structure> out;
  std::vector<int> choice(nv, 0);

  std::function<void(int, int)> per_vertex = [&](int v, int brank) {
    if (brank > rank_hi) return;
    if (v == nv) {
      // Choose the cut-edge subset, then distribute the extra cuts.
      for (std::uint32_t mask = 0; mask < (1u << ne); ++mask) {
        std::vector<int> cuts(ne, 0);
        for (int ei = 0; ei < ne; ++ei)
          if (mask & (1u << ei)) cuts[ei] = 1;
        BlockModel bm = block_model(g, menus, choice, cuts);
        int extra = k - bm.total_comps;
        int nS = __builtin_popcount(mask);
        if (extra < 0) continue;
        if (nS == 0 && extra > 0) continue;
        int rank0 = brank + nS;
        if (rank0 + extra < k - 1 || rank0 + extra > rank_hi) continue;
        if (extra > (mesh - 2) * std::max(nS, 0)) continue;
        if (rigid_only && !structure_rigid(g, bm, cuts)) continue;
        // Distribute `extra` additional cuts over the nS cut edges.
        std::vector<int> slots;
        for (int ei = 0; ei < ne; ++ei)
          if (cuts[ei]) slots.push_back(ei);
        std::function<void(std::size_t, int)> distribute = [&](std::size_t si, int left) {
          if (static_cast<long long>(out.size()) > cap)
            throw SearchSpaceTooLarge("more than " + std::to_string(cap) + " structures");
          if (si == slots.size()) {
            if (left != 0) return;
            Structure st;
            st.choice = choice;
            st.cuts = cuts;
            st.brank = brank;
            st.rank = brank;
            for (int c : cuts) st.rank += c;
            st.bound = structure_bound(g, bm, cuts, kind);
            out.push_back(std::move(st));
            return;
          }
          int room = std::min(left, mesh - 2);
          for (int add = 0; add <= room; ++add) {
            cuts[slots[si]] = 1 + add;
            distribute(si + 1, left - add);
          }
          cuts[slots[si]] = 1;
        };
        if (nS == 0) {
          if (extra == 0) distribute(0, 0);
        } else {
          distribute(0, extra);
        }
      }
      return;
    }
    for (std::size_t c = 0; c < menus.by_vertex[v].size(); ++c) {
      choice[v] = static_cast<int>(c);
      per_vertex(v + 1, brank + static_cast<int>(menus.by_vertex[v][c].size()) - 1);
    }
    choice[v] = 0;
  };
  per_vertex(0, 0);
  return out;
}

/// Builds the clusters of a structure at concrete cut positions, without
/// constructing the full Partition. Returns per cluster its graph and the
/// boundary vertex indices. Cluster order: block components first (by id),
/// then middle fragments in edge order.
struct LightCluster {
  MetricGraph graph;
  std::vector<int> boundary;
};

inline std::vector<LightCluster> build_clusters(
    const MetricGraph& g, const GroupingMenus& menus, const Structure& st,
    const std::map<int, std::vector<double>>& positions) {
  BlockModel bm = block_model(g, menus, st.choice, st.cuts);
  int ncomp = bm.total_comps;
  // Fragment ids per edge.
  struct Frag {
    EdgeId id;
    double len;
    EdgeId src;
    double off;
    int comp;
  };
  std::vector<std::vector<Frag>> frags(g.edge_count());
  EdgeId next_id = 0;
  int middle = bm.ncomp_blocks;
  for (int ei = 0; ei < g.edge_count(); ++ei) {
    const Edge& e = g.edges()[ei];
    int cs = bm.block_comp[bm.block_of(g, {e.id, End::Source})];
    int ct = bm.block_comp[bm.block_of(g, {e.id, End::Target})];
    int c = st.cuts[ei];
    std::vector<double> ps;
    if (c > 0) {
      auto it = positions.find(ei);
      if (it == positions.end() || static_cast<int>(it->second.size()) != c)
        throw Error("positions missing for a cut edge");
      ps = it->second;
    }
    double prev = 0;
    for (int j = 0; j <= c; ++j) {
      double hi = j == c ? e.length : ps[j];
      int comp = j == 0 ? cs : (j == c ? ct : middle++);
      frags[ei].push_back(
          Frag{next_id++, hi - prev, e.source_id, e.source_offset + prev, comp});
      prev = hi;
    }
  }
  // Assemble vertices per component.
  struct PendingVertex {
    Vertex endpoints;
    bool boundary;
  };
  std::vector<std::vector<Frag>> comp_edges(ncomp);
  std::vector<std::vector<PendingVertex>> comp_verts(ncomp);
  for (int ei = 0; ei < g.edge_count(); ++ei)
    for (const Frag& f : frags[ei]) comp_edges[f.comp].push_back(f);
  for (int v = 0; v < g.vertex_count(); ++v) {
    const Vertex& hv = g.vertex(v);
    for (const Vertex& block : bm.blocks[v]) {
      Vertex renamed;
      for (const EndpointRef& p : block) {
        int ei = -1;
        for (int i = 0; i < g.edge_count(); ++i)
          if (g.edges()[i].id == p.edge) { ei = i; break; }
        renamed.push_back(p.end == End::Source
                              ? EndpointRef{frags[ei].front().id, End::Source}
                              : EndpointRef{frags[ei].back().id, End::Target});
      }
      int comp = bm.block_comp[bm.block_of(g, block[0])];
      comp_verts[comp].push_back({renamed, block.size() < hv.size()});
    }
  }
  for (int ei = 0; ei < g.edge_count(); ++ei) {
    for (std::size_t j = 0; j + 1 < frags[ei].size(); ++j) {
      const Frag& a = frags[ei][j];
      const Frag& b = frags[ei][j + 1];
      comp_verts[a.comp].push_back({{{a.id, End::Target}}, true});
      comp_verts[b.comp].push_back({{{b.id, End::Source}}, true});
    }
  }
  std::vector<LightCluster> out;
  for (int c = 0; c < ncomp; ++c) {
    std::vector<Edge> edges;
    for (const Frag& f : comp_edges[c]) edges.push_back(Edge{f.id, f.len, f.src, f.off});
    std::vector<Vertex> verts;
    std::vector<Vertex> boundary_sets;
    for (PendingVertex& pv : comp_verts[c]) {
      std::sort(pv.endpoints.begin(), pv.endpoints.end());
      if (pv.boundary) boundary_sets.push_back(pv.endpoints);
      verts.push_back(pv.endpoints);
    }
    LightCluster lc{MetricGraph(std::move(edges), std::move(verts)), {}};
    for (const Vertex& b : boundary_sets) lc.boundary.push_back(lc.graph.vertex_of(b[0]));
    std::sort(lc.boundary.begin(), lc.boundary.end());
    out.push_back(std::move(lc));
  }
  return out;
}

/// Realizes the structure as a genuine Partition: subdivides the host at the
/// cut positions and applies the vertex groupings plus full dummy splits.
inline Partition realize_partition(const MetricGraph& g, const GroupingMenus& menus,
                                   const Structure& st,
                                   const std::map<int, std::vector<double>>& positions) {
  MetricGraph host = g;
  std::vector<EndpointRef> reps;
  for (int v = 0; v < g.vertex_count(); ++v) reps.push_back(g.vertex(v)[0]);
  std::vector<EndpointRef> dummy_marks;
  // Rename table applied to arbitrary endpoint refs of the original graph.
  std::map<EndpointRef, EndpointRef> rename;
  auto resolve = [&](EndpointRef p) {
    auto it = rename.find(p);
    return it == rename.end() ? p : it->second;
  };
  for (int ei = 0; ei < g.edge_count(); ++ei) {
    if (st.cuts[ei] == 0) continue;
    const Edge& e = g.edges()[ei];
    auto it = positions.find(ei);
    if (it == positions.end()) throw Error("positions missing for a cut edge");
    EdgeId cur_id = e.id;
    double base = 0;
    EndpointRef orig_target{e.id, End::Target};
    for (double t : it->second) {
      SubdivideResult r = subdivide_ex(host, cur_id, t - base);
      host = std::move(r.graph);
      if (base == 0) rename[{e.id, End::Source}] = {r.left, End::Source};
      rename[orig_target] = {r.right, End::Target};
      dummy_marks.push_back({r.left, End::Target});
      cur_id = r.right;
      base = t;
    }
  }
  std::map<int, std::vector<Vertex>> groupings;
  for (int v = 0; v < g.vertex_count(); ++v) {
    const auto& part = menus.by_vertex[v][st.choice[v]];
    if (part.size() < 2) continue;
    std::vector<Vertex> blocks;
    for (const auto& idxs : part) {
      Vertex block;
      for (int i : idxs) block.push_back(resolve(g.vertex(v)[i]));
      std::sort(block.begin(), block.end());
      blocks.push_back(std::move(block));
    }
    int hv = host.vertex_of(blocks[0][0]);
    groupings[hv] = std::move(blocks);
  }
  for (const EndpointRef& m : dummy_marks) {
    int dv = host.vertex_of(m);
    const Vertex& vert = host.vertex(dv);
    groupings[dv] = {Vertex{vert[0]}, Vertex{vert[1]}};
  }
  CutRelation rel = make_cut(host, groupings);
  return partition_all_components(host, rel);
}

inline std::string structure_description(const MetricGraph& g, const GroupingMenus& menus,
                                         const Structure& st,
                                         const std::map<int, std::vector<double>>& positions) {
  std::string d;
  for (int v = 0; v < g.vertex_count(); ++v) {
    const auto& part = menus.by_vertex[v][st.choice[v]];
    if (part.size() < 2) continue;
    d += "v" + std::to_string(v) + "{";
    for (const auto& idxs : part) {
      for (int i : idxs) d += std::to_string(i);
      d += "|";
    }
    d += "}";
  }
  for (int ei = 0; ei < g.edge_count(); ++ei) {
    if (st.cuts[ei] == 0) continue;
    d += "e" + std::to_string(g.edges()[ei].id) + "(";
    auto it = positions.find(ei);
    if (it != positions.end())
      for (double t : it->second) d += quantized(t) + ",";
    d += ")";
  }
  return d;
}

}  // namespace detail

/// Every exhaustive k-partition whose interior cut points lie on the uniform
/// mesh {i |e| / M} and whose vertex groupings have at most max_block_splits
/// blocks; deterministic order (rank, then cut description).
inline std::vector<Partition> enumerate_partitions(
    const MetricGraph& g, int k, int mesh_per_edge,
    int max_block_splits = std::numeric_limits<int>::max(),
    long long max_candidates = 200'000) {
  if (!g.connected()) throw Disconnected("enumerate_partitions needs a connected graph");
  if (k < 1 || mesh_per_edge < 1) throw Error("need k >= 1 and mesh >= 1");
  int beta = topology(g).betti;
  auto menus = detail::grouping_menus(g, max_block_splits);
  auto structures = detail::enumerate_structures(g, menus, k, mesh_per_edge, beta, false,
                                                 EnergyKind::Dirichlet, max_candidates);
  struct Item {
    int rank;
    std::string desc;
    Partition part;
  };
  std::vector<Item> items;
  for (const auto& st : structures) {
    // All placements of the cuts on the mesh: per edge, choose cuts[ei]
    // of the M-1 interior mesh points, in increasing order.
    std::vector<int> cut_edges;
    for (int ei = 0; ei < g.edge_count(); ++ei)
      if (st.cuts[ei] > 0) cut_edges.push_back(ei);
    std::map<int, std::vector<double>> positions;
    std::function<void(std::size_t)> place = [&](std::size_t i) {
      if (static_cast<long long>(items.size()) > max_candidates)
        throw SearchSpaceTooLarge("more than " + std::to_string(max_candidates) +
                                  " partitions");
      if (i == cut_edges.size()) {
        Partition p = detail::realize_partition(g, menus, st, positions);
        items.push_back(
            {st.rank, detail::structure_description(g, menus, st, positions),
             std::move(p)});
        return;
      }
      int ei = cut_edges[i];
      int c = st.cuts[ei];
      double len = g.edges()[ei].length;
      std::vector<int> idx(c);
      std::iota(idx.begin(), idx.end(), 1);
      for (;;) {
        std::vector<double> ps;
        for (int j : idx) ps.push_back(len * j / mesh_per_edge);
        positions[ei] = ps;
        place(i + 1);
        // next combination of idx in {1..M-1}
        int j = c - 1;
        while (j >= 0 && idx[j] == mesh_per_edge - 1 - (c - 1 - j)) --j;
        if (j < 0) break;
        ++idx[j];
        for (int l = j + 1; l < c; ++l) idx[l] = idx[l - 1] + 1;
      }
      positions.erase(ei);
    };
    place(0);
  }
  std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
    if (a.rank != b.rank) return a.rank < b.rank;
    return a.desc < b.desc;
  });
  std::vector<Partition> out;
  for (Item& it : items) out.push_back(std::move(it.part));
  return out;
}

}  // namespace mgsp
