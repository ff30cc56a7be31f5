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
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "mgsp/domains.hpp"
#include "mgsp/energy.hpp"
#include "mgsp/enumerate.hpp"

namespace mgsp {

/// Computed upper estimate of the spectral minimal energy, with the
/// witnessing partition.
struct EnergyEstimate {
  EnergyKind kind = EnergyKind::Dirichlet;
  int k = 1;
  double value = 0;
  Partition witness;
  int mesh = 8;
  bool refined = false;
  bool rigid_restricted = false;
};

struct MinimizeOptions {
  bool refine = true;
  bool rigid_only = false;
  int max_block_splits = std::numeric_limits<int>::max();
  long long max_structures = 2'000'000;
  int shortlist = 12;
  int product_budget = 2048;   // full mesh product scan below this many placements
  int scan_passes = 2;
  double position_tol = 1e-6;  // golden-section stop in cut position
  bool override_caps = false;
};

namespace detail {

struct PositionSearchState {
  std::map<int, std::vector<double>> positions;  // edge index -> ascending cuts
  double value = std::numeric_limits<double>::infinity();
};

inline double eval_structure(const MetricGraph& g, const GroupingMenus& menus,
                             const Structure& st,
                             const std::map<int, std::vector<double>>& positions,
                             EnergyKind kind, double abort_above) {
  auto clusters = build_clusters(g, menus, st, positions);
  double worst = 0;
  for (const LightCluster& c : clusters) {
    worst = std::max(worst, cluster_energy(c.graph, c.boundary, kind));
    if (worst > abort_above) return worst;
  }
  return worst;
}

/// Max cluster energy plus a tiny multiple of the energy sum. The tilt
/// breaks the plateaus of the pure max objective (coordinates that do not
/// attain the max see a flat slice), while moving the minimizer only at the
/// 1e-9 relative level.
inline double eval_structure_tilted(const MetricGraph& g, const GroupingMenus& menus,
                                    const Structure& st,
                                    const std::map<int, std::vector<double>>& positions,
                                    EnergyKind kind) {
  auto clusters = build_clusters(g, menus, st, positions);
  double worst = 0, sum = 0;
  for (const LightCluster& c : clusters) {
    double e = cluster_energy(c.graph, c.boundary, kind);
    worst = std::max(worst, e);
    sum += e;
  }
  return worst + 1e-9 * sum;
}

/// Full product scan over mesh placements; count must be small.
template <typename Yield>
void for_each_mesh_placement(const MetricGraph& g, const Structure& st, int mesh,
                             Yield&& yield) {
  std::vector<int> cut_edges;
  for (int ei = 0; ei < g.edge_count(); ++ei)
    if (st.cuts[ei] > 0) cut_edges.push_back(ei);
  std::map<int, std::vector<double>> positions;
  std::function<void(std::size_t)> place = [&](std::size_t i) {
    if (i == cut_edges.size()) {
      yield(positions);
      return;
    }
    int ei = cut_edges[i];
    int c = st.cuts[ei];
    double len = g.edges()[ei].length;
    std::vector<int> idx(c);
    std::iota(idx.begin(), idx.end(), 1);
    for (;;) {
      std::vector<double> ps;
      for (int j : idx) ps.push_back(len * j / mesh);
      positions[ei] = ps;
      place(i + 1);
      int j = c - 1;
      while (j >= 0 && idx[j] == mesh - 1 - (c - 1 - j)) --j;
      if (j < 0) break;
      ++idx[j];
      for (int l = j + 1; l < c; ++l) idx[l] = idx[l - 1] + 1;
    }
    positions.erase(ei);
  };
  place(0);
}

inline long long placement_count(const MetricGraph& g, const Structure& st, int mesh) {
  auto choose = [](int n, int k) -> long long {
    if (k < 0 || k > n) return 0;
    long long r = 1;
    for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
  };
  long long total = 1;
  for (int ei = 0; ei < g.edge_count(); ++ei) {
    if (st.cuts[ei] == 0) continue;
    total *= choose(mesh - 1, st.cuts[ei]);
    if (total > (1ll << 40)) return total;
  }
  return total;
}

/// Mesh search for the best placement of one structure: exact product scan
/// when affordable, otherwise coordinate-wise sweeps from an equispaced
/// start.
inline PositionSearchState mesh_search(const MetricGraph& g, const GroupingMenus& menus,
                                       const Structure& st, int mesh, EnergyKind kind,
                                       double abort_above, const MinimizeOptions& opts) {
  PositionSearchState best;
  bool any_cut = false;
  for (int c : st.cuts) any_cut |= c > 0;
  if (!any_cut) {
    best.positions.clear();
    best.value = eval_structure(g, menus, st, best.positions, kind, abort_above);
    return best;
  }
  if (placement_count(g, st, mesh) <= opts.product_budget) {
    for_each_mesh_placement(g, st, mesh, [&](const std::map<int, std::vector<double>>& ps) {
      double v = eval_structure(g, menus, st, ps, kind, std::min(abort_above, best.value));
      if (v < best.value) {
        best.value = v;
        best.positions = ps;
      }
    });
    return best;
  }
  // Coordinate-wise sweep on the mesh.
  std::map<int, std::vector<int>> idx;  // mesh indices per cut edge
  for (int ei = 0; ei < g.edge_count(); ++ei) {
    if (st.cuts[ei] == 0) continue;
    int c = st.cuts[ei];
    std::vector<int> v(c);
    for (int j = 0; j < c; ++j)
      v[j] = std::max(1, std::min(mesh - 1, static_cast<int>(std::lround(
                                                double(mesh) * (j + 1) / (c + 1)))));
    for (int j = 1; j < c; ++j) v[j] = std::max(v[j], v[j - 1] + 1);
    idx[ei] = v;
  }
  auto to_positions = [&](const std::map<int, std::vector<int>>& ix) {
    std::map<int, std::vector<double>> ps;
    for (auto& [ei, v] : ix) {
      std::vector<double> p;
      for (int j : v) p.push_back(g.edges()[ei].length * j / mesh);
      ps[ei] = p;
    }
    return ps;
  };
  best.positions = to_positions(idx);
  best.value = eval_structure(g, menus, st, best.positions, kind, abort_above);
  for (int pass = 0; pass < opts.scan_passes; ++pass) {
    bool improved = false;
    for (auto& [ei, v] : idx) {
      int c = static_cast<int>(v.size());
      for (int j = 0; j < c; ++j) {
        int lo = j == 0 ? 1 : v[j - 1] + 1;
        int hi = j == c - 1 ? mesh - 1 : v[j + 1] - 1;
        int best_i = v[j];
        for (int cand = lo; cand <= hi; ++cand) {
          if (cand == v[j]) continue;
          v[j] = cand;
          auto ps = to_positions(idx);
          double val = eval_structure(g, menus, st, ps, kind, best.value);
          if (val < best.value) {
            best.value = val;
            best.positions = ps;
            best_i = cand;
            improved = true;
          }
        }
        v[j] = best_i;
      }
    }
    if (!improved) break;
  }
  return best;
}

/// Golden-section coordinate descent on the cut positions, keeping the
/// combinatorial structure fixed.
inline PositionSearchState refine_positions(const MetricGraph& g, const GroupingMenus& menus,
                                            const Structure& st, PositionSearchState state,
                                            EnergyKind kind, const MinimizeOptions& opts) {
  if (state.positions.empty()) return state;
  // Coordinate descent on the tilted objective converges linearly; sweep
  // until the positions move by less than the position tolerance.
  double tilted = eval_structure_tilted(g, menus, st, state.positions, kind);
  for (int pass = 0; pass < 100; ++pass) {
    double moved = 0;
    for (auto& [ei, ps] : state.positions) {
      double len = g.edges()[ei].length;
      double margin = 1e-7 * len;
      for (std::size_t j = 0; j < ps.size(); ++j) {
        double lo = (j == 0 ? 0.0 : ps[j - 1]) + margin;
        double hi = (j + 1 == ps.size() ? len : ps[j + 1]) - margin;
        if (hi <= lo) continue;
        auto slice = [&](double x) {
          auto trial = state.positions;
          trial[ei][j] = x;
          return eval_structure_tilted(g, menus, st, trial, kind);
        };
        double x = golden_min(slice, lo, hi, opts.position_tol * 0.25);
        double v = slice(x);
        if (v < tilted) {
          moved = std::max(moved, std::abs(x - state.positions[ei][j]));
          tilted = v;
          state.positions[ei][j] = x;
        }
      }
    }
    if (moved < opts.position_tol) break;
  }
  state.value = eval_structure(g, menus, st, state.positions, kind,
                               std::numeric_limits<double>::infinity());
  return state;
}

}  // namespace detail

/// Upper estimate of the spectral minimal energy over exhaustive
/// k-partitions: enumerates every combinatorial cut structure consistent
/// with the rank bounds, scans cut positions on the mesh, and optionally
/// refines the shortlisted candidates with golden-section coordinate
/// descent. The value is an upper bound on the infimum by construction.
inline EnergyEstimate minimize_energy(const MetricGraph& g, int k, EnergyKind kind,
                                      int mesh = 8, const MinimizeOptions& opts = {}) {
  if (!g.connected()) throw Disconnected("minimize_energy needs a connected graph");
  if (k < 1) throw Error("k >= 1 required");
  if (!opts.override_caps) {
    if (g.edge_count() > 10 || k > 6 || mesh > 16)
      throw SearchSpaceTooLarge(
          "feasibility caps |E| <= 10, k <= 6, mesh <= 16 (override to lift)");
  }
  EnergyEstimate est;
  est.kind = kind;
  est.k = k;
  est.mesh = mesh;
  est.refined = opts.refine;
  est.rigid_restricted = opts.rigid_only;
  if (k == 1 && kind == EnergyKind::Dirichlet) {
    // The trivial 1-partition has no boundary, hence energy 0.
    est.witness = partition_all_components(g, identity_relation(g));
    est.value = 0;
    return est;
  }
  int beta = topology(g).betti;
  auto menus = detail::grouping_menus(g, opts.max_block_splits);
  auto structures = detail::enumerate_structures(g, menus, k, mesh, beta, opts.rigid_only,
                                                 kind, opts.max_structures);
  if (structures.empty()) throw InfeasibleK("no exhaustive " + std::to_string(k) +
                                            "-partition at this mesh");
  std::stable_sort(structures.begin(), structures.end(),
                   [](const detail::Structure& a, const detail::Structure& b) {
                     if (a.bound != b.bound) return a.bound < b.bound;
                     return a.rank < b.rank;
                   });

  struct Candidate {
    double value;
    int rank;
    std::string desc;
    const detail::Structure* st;
    detail::PositionSearchState state;
  };
  std::vector<Candidate> shortlist;
  auto worst_allowed = [&]() {
    if (static_cast<int>(shortlist.size()) < opts.shortlist)
      return std::numeric_limits<double>::infinity();
    return shortlist.back().value * (1 + 1e-9);
  };
  for (const detail::Structure& st : structures) {
    if (st.bound > worst_allowed()) break;
    auto state = detail::mesh_search(g, menus, st, mesh, kind, worst_allowed(), opts);
    if (!std::isfinite(state.value) || state.value > worst_allowed()) continue;
    Candidate c{state.value, st.rank,
                detail::structure_description(g, menus, st, state.positions), &st,
                std::move(state)};
    shortlist.push_back(std::move(c));
    std::sort(shortlist.begin(), shortlist.end(), [](const Candidate& a, const Candidate& b) {
      if (a.value != b.value) return a.value < b.value;
      if (a.rank != b.rank) return a.rank < b.rank;
      return a.desc < b.desc;
    });
    if (static_cast<int>(shortlist.size()) > opts.shortlist) shortlist.pop_back();
  }
  if (shortlist.empty()) throw InfeasibleK("no evaluable candidate");

  if (opts.refine) {
    for (Candidate& c : shortlist) {
      c.state = detail::refine_positions(g, menus, *c.st, std::move(c.state), kind, opts);
      c.value = c.state.value;
      c.desc = detail::structure_description(g, menus, *c.st, c.state.positions);
    }
    std::sort(shortlist.begin(), shortlist.end(), [](const Candidate& a, const Candidate& b) {
      if (a.value != b.value) return a.value < b.value;
      if (a.rank != b.rank) return a.rank < b.rank;
      return a.desc < b.desc;
    });
  }
  const Candidate& win = shortlist.front();
  est.value = win.value;
  est.witness = detail::realize_partition(g, menus, *win.st, win.state.positions);
  return est;
}

// ---------------------------------------------------------------------------
// Constructive-proof utilities.
// ---------------------------------------------------------------------------

namespace detail {

/// Picks, within the multiplicity group ending at 1-based index `idx`, an
/// eigenfunction without zero edges if one exists.
inline Mode pick_mode(const Spectrum& s, int idx) {
  const Mode& want = s.modes.at(idx - 1);
  for (int j = idx - 1; j < static_cast<int>(s.modes.size()); ++j) {
    const Mode& m = s.modes[j];
    if (std::abs(m.lambda - want.lambda) > 1e-9 * std::max(1.0, want.lambda)) break;
    double scale = 0;
    for (const TrigPiece& t : m.coef) scale = std::max(scale, t.amplitude());
    bool zero_edge = false;
    for (const TrigPiece& t : m.coef)
      if (t.amplitude() <= 1e-9 * scale) zero_edge = true;
    if (!zero_edge) return m;
  }
  return want;
}

}  // namespace detail

/// Builds the Dirichlet test partition of Lemma-5.5 type from an N-partition
/// witness: cut every cluster at the zeros of its mu_2 eigenfunction, then
/// undo the witness cuts one simple cut at a time, rescaling or zeroing one
/// nodal piece per gluing so that the glued function stays H^1. The result
/// has at least 2k - rank clusters and its D energy is at most the witness's
/// N energy (asserted by the caller / test suite).
inline Partition nodal_partition_from_N_minimizer(const Partition& witness) {
  if (!witness.exhaustive) throw Error("witness must be exhaustive");
  const MetricGraph& host = witness.host;

  // mu_2 eigenfunctions per cluster, assembled into one function on the cut
  // graph (edge ids are shared).
  PiecewiseTrig u;
  for (int i = 0; i < witness.k(); ++i) {
    SpectralProblem sp = all_standard(witness.clusters[i]);
    Spectrum s = eigenvalues(sp, 2);
    Mode m = detail::pick_mode(s, 2);
    double scale = 0;
    for (const TrigPiece& t : m.coef) scale = std::max(scale, t.amplitude());
    for (int e = 0; e < witness.clusters[i].edge_count(); ++e) {
      if (m.coef[e].amplitude() <= 1e-9 * scale)
        throw DegenerateEigenfunction("cluster eigenfunction vanishes on an edge");
      u.parts[witness.clusters[i].edges()[e].id] = m.coef[e];
    }
  }
  double scale = u.max_amplitude();

  // Interior zeros per host edge.
  std::map<EdgeId, std::vector<double>> zero_points;
  for (const Edge& e : host.edges()) {
    const TrigPiece* t = u.piece(e.id);
    if (!t) continue;
    auto z = detail::interior_points(*t, e.length, /*zeros=*/true, scale);
    if (!z.empty()) zero_points[e.id] = std::move(z);
  }

  // Subdivide the relation (host and cut graph together) at those zeros,
  // carrying u across.
  CutRelation rel = witness.minimal_cut;
  for (const auto& [edge, raw] : zero_points) {
    std::vector<double> ps = raw;
    std::sort(ps.begin(), ps.end());
    EdgeId cur = edge;
    double base = 0;
    for (double t : ps) {
      const TrigPiece* piece = u.piece(cur);
      TrigPiece left = piece ? *piece : TrigPiece{};
      TrigPiece right = piece ? piece->shifted(t - base) : TrigPiece{};
      EdgeId left_id = rel.original().fresh_edge_id();
      rel = subdivide_relation(rel, cur, t - base);
      u.parts.erase(cur);
      u.parts[left_id] = left;
      u.parts[left_id + 1] = right;
      cur = left_id + 1;
      base = t;
    }
  }
  const MetricGraph& host2 = rel.original();
  const MetricGraph& gp = rel.cut();

  // Nodal pieces: components of the maximal cut of the cut graph at every
  // vertex where u vanishes (non-degenerately).
  auto vertex_is_zero = [&](const MetricGraph& g, int v) {
    return std::abs(u.value_at(g, g.vertex(v)[0])) <= 1e-8 * scale;
  };
  std::vector<int> zero_vertices;
  for (int v = 0; v < gp.vertex_count(); ++v)
    if (vertex_is_zero(gp, v)) zero_vertices.push_back(v);
  CutRelation fine_rel = maximal_cut(gp, zero_vertices);
  const MetricGraph& fine = fine_rel.cut();
  std::vector<int> fine_comp = fine.vertex_components();
  int nfine = 1 + *std::max_element(fine_comp.begin(), fine_comp.end());
  std::vector<std::vector<EdgeId>> fine_edges(nfine);
  for (const Edge& e : fine.edges())
    fine_edges[fine_comp[fine.vertex_of({e.id, End::Source})]].push_back(e.id);

  // Union-find over pieces with an alive flag.
  std::vector<int> parent(nfine);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<bool> dead(nfine, false);
  auto scale_piece = [&](int root, double alpha) {
    for (int c = 0; c < nfine; ++c) {
      if (find(c) != root) continue;
      for (EdgeId e : fine_edges[c]) {
        auto it = u.parts.find(e);
        if (it == u.parts.end()) continue;
        it->second.a *= alpha;
        it->second.b *= alpha;
      }
    }
  };
  auto piece_at = [&](const EndpointRef& p) { return find(fine_comp[fine.vertex_of(p)]); };

  // Undo the witness cuts, last split first.
  auto seq = simple_cut_sequence(rel);
  for (auto it = seq.rbegin(); it != seq.rend(); ++it) {
    const CutRelation& step = *it;
    int split = step.cut_set().at(0);
    std::vector<int> halves;
    for (int v = 0; v < step.cut().vertex_count(); ++v)
      if (step.vertex_map()[v] == split) halves.push_back(v);
    const Vertex& h1 = step.cut().vertex(halves.at(0));
    const Vertex& h2 = step.cut().vertex(halves.at(1));
    double y1 = u.value_at(host2, h1[0]);   // evaluation only needs the edge id
    double y2 = u.value_at(host2, h2[0]);
    scale = std::max(scale, u.max_amplitude());
    bool z1 = std::abs(y1) <= 1e-8 * scale;
    bool z2 = std::abs(y2) <= 1e-8 * scale;
    if (z1 && z2) continue;
    if (z1 != z2) {
      int p = z1 ? piece_at(h2[0]) : piece_at(h1[0]);
      scale_piece(p, 0.0);
      dead[p] = true;
      continue;
    }
    int p1 = piece_at(h1[0]), p2 = piece_at(h2[0]);
    if (p1 == p2) {
      if (std::abs(y1 - y2) <= 1e-8 * scale) continue;  // self-glue at equal value
      scale_piece(p1, 0.0);
      dead[p1] = true;
      continue;
    }
    scale_piece(p2, y1 / y2);
    bool d = dead[p1] || dead[p2];
    parent[find(p2)] = find(p1);
    dead[find(p1)] = d;
  }

  // Final partition: maximal cut of the subdivided host at the zeros of the
  // final u, keeping the components where u survives.
  scale = u.max_amplitude();
  if (scale <= 0) throw DegenerateEigenfunction("construction zeroed everything");
  std::vector<int> final_zero_vertices;
  for (int v = 0; v < host2.vertex_count(); ++v) {
    bool all_dead = true;
    for (const EndpointRef& p : host2.vertex(v)) {
      const TrigPiece* t = u.piece(p.edge);
      if (t && t->amplitude() > 1e-8 * scale) all_dead = false;
    }
    if (!all_dead && vertex_is_zero(host2, v)) final_zero_vertices.push_back(v);
  }
  CutRelation final_rel = maximal_cut(host2, final_zero_vertices);
  const MetricGraph& fcut = final_rel.cut();
  auto fcomp = fcut.vertex_components();
  int nf = 1 + *std::max_element(fcomp.begin(), fcomp.end());
  std::vector<std::vector<EdgeId>> comp_edges(nf);
  std::vector<bool> live(nf, false);
  for (const Edge& e : fcut.edges()) {
    int c = fcomp[fcut.vertex_of({e.id, End::Source})];
    comp_edges[c].push_back(e.id);
    const TrigPiece* t = u.piece(e.id);
    if (t && t->amplitude() > 1e-8 * scale) live[c] = true;
  }
  std::vector<std::vector<EdgeId>> selected;
  for (int c = 0; c < nf; ++c)
    if (live[c]) selected.push_back(comp_edges[c]);
  return partition_from_cut(host2, final_rel, selected);
}

/// Builds the N test partition of Lemma-6.2 type from a D-partition witness:
/// the exhaustive partition cut at every nonzero extremum of the cluster
/// ground states. Every returned cluster contains a boundary vertex of the
/// witness.
inline Partition neumann_partition_from_D_minimizer(const Partition& witness) {
  if (!witness.exhaustive) throw Error("witness must be exhaustive");
  const MetricGraph& host = witness.host;
  PiecewiseTrig u;
  std::vector<double> cluster_lambda(witness.k());
  for (int i = 0; i < witness.k(); ++i) {
    SpectralProblem sp =
        cluster_problem(witness.clusters[i], witness.cluster_boundaries[i],
                        EnergyKind::Dirichlet);
    bool has_dirichlet = !witness.cluster_boundaries[i].empty();
    Spectrum s = eigenvalues(sp, has_dirichlet ? 1 : 2);
    Mode m = s.modes[has_dirichlet ? 0 : 1];
    cluster_lambda[i] = m.lambda;
    for (int e = 0; e < witness.clusters[i].edge_count(); ++e)
      u.parts[witness.clusters[i].edges()[e].id] = m.coef[e];
  }
  double scale = u.max_amplitude();

  std::map<EdgeId, std::vector<double>> extremum_points;
  for (const Edge& e : host.edges()) {
    const TrigPiece* t = u.piece(e.id);
    if (!t) continue;
    auto x = detail::interior_points(*t, e.length, /*zeros=*/false, scale);
    if (!x.empty()) extremum_points[e.id] = std::move(x);
  }
  std::vector<int> extremum_vertices;
  std::vector<bool> is_boundary(host.vertex_count(), false);
  for (int v : witness.boundary_vertices) is_boundary[v] = true;
  for (int v = 0; v < host.vertex_count(); ++v) {
    double val = u.value_at(host, host.vertex(v)[0]);
    if (std::abs(val) <= 1e-8 * scale) continue;
    bool extremum = true;
    for (const EndpointRef& p : host.vertex(v)) {
      const TrigPiece* t = u.piece(p.edge);
      double kscale = t ? std::max(1.0, t->k) : 1.0;
      if (std::abs(u.outgoing_derivative_at(host, p)) > 1e-8 * scale * kscale)
        extremum = false;
    }
    if (!extremum) continue;
    if (is_boundary[v])
      throw GenericityFailure("nonzero extremum at a cut vertex");
    if (host.degree(v) >= 2) extremum_vertices.push_back(v);
  }

  std::map<EdgeId, std::vector<double>> pts = extremum_points;
  auto sub = detail::subdivide_with_function(host, u, pts);
  std::vector<int> cut_at = sub.dummy_vertices;
  for (int v : extremum_vertices) cut_at.push_back(sub.vertex_map[v]);
  CutRelation rel = maximal_cut(sub.graph, cut_at);
  return partition_all_components(sub.graph, rel);
}

// ---------------------------------------------------------------------------
// Whole-graph verification: interlacing checks, eigenvalue bounds, Eulerian
// cover count, and the constructed equality partition.
// ---------------------------------------------------------------------------

/// Minimal number of edge-disjoint trails covering a connected graph:
/// max(1, #odd-degree vertices / 2).
inline int eulerian_cover_count(const MetricGraph& g) {
  if (!g.connected()) throw Disconnected("eulerian_cover_count needs a connected graph");
  int odd = 0;
  for (int v = 0; v < g.vertex_count(); ++v)
    if (g.degree(v) % 2 == 1) ++odd;
  return std::max(1, odd / 2);
}

/// The equality partition behind lambda_k(G) >= L^N_k(G): partition edge e_i
/// into j_i equal subintervals, where the lambda_{j_i}(e_i) exhaust the first
/// k all-Dirichlet eigenvalues. Its N energy equals lambda_k exactly.
inline std::pair<Partition, double> cor13_partition(const MetricGraph& g, int k,
                                                    double lambda_k) {
  std::vector<int> j(g.edge_count(), 0);
  double pi = M_PI;
  long long total = 0;
  for (int i = 0; i < g.edge_count(); ++i) {
    double len = g.edges()[i].length;
    j[i] = static_cast<int>(std::floor(std::sqrt(lambda_k * (1 + 1e-12)) * len / pi));
    total += j[i];
  }
  // Multiple eigenvalues: drop ties (from the highest edge index) until
  // exactly k subintervals remain.
  for (int i = g.edge_count() - 1; i >= 0 && total > k; --i) {
    while (j[i] > 0 && total > k) {
      double len = g.edges()[i].length;
      double lam = pi * pi * j[i] * j[i] / (len * len);
      if (std::abs(lam - lambda_k) > 1e-9 * std::max(1.0, lambda_k)) break;
      --j[i];
      --total;
    }
  }
  if (total != k) throw Error("cor13: subinterval count mismatch");

  PiecewiseTrig dummy;  // no function needed; reuse the subdivision helper
  std::map<EdgeId, std::vector<double>> pts;
  for (int i = 0; i < g.edge_count(); ++i) {
    if (j[i] < 2) continue;
    std::vector<double> ps;
    double len = g.edges()[i].length;
    for (int l = 1; l < j[i]; ++l) ps.push_back(len * l / j[i]);
    pts[g.edges()[i].id] = ps;
  }
  auto sub = detail::subdivide_with_function(g, dummy, pts);
  std::vector<int> all_vertices(sub.graph.vertex_count());
  std::iota(all_vertices.begin(), all_vertices.end(), 0);
  CutRelation rel = maximal_cut(sub.graph, all_vertices);
  // Components are single fragments; keep those of edges with j_i >= 1.
  std::vector<bool> keep_src(g.edge_count(), false);
  std::map<EdgeId, int> src_index;
  for (int i = 0; i < g.edge_count(); ++i) {
    src_index[g.edges()[i].id] = i;
    keep_src[i] = j[i] >= 1;
  }
  const MetricGraph& cut = rel.cut();
  auto comp = cut.vertex_components();
  int nc = 1 + *std::max_element(comp.begin(), comp.end());
  std::vector<std::vector<EdgeId>> comp_edges(nc);
  std::vector<bool> keep(nc, false);
  for (const Edge& e : cut.edges()) {
    int c = comp[cut.vertex_of({e.id, End::Source})];
    comp_edges[c].push_back(e.id);
    if (keep_src[src_index[e.source_id]]) keep[c] = true;
  }
  std::vector<std::vector<EdgeId>> selected;
  for (int c = 0; c < nc; ++c)
    if (keep[c]) selected.push_back(comp_edges[c]);
  Partition p = partition_from_cut(sub.graph, rel, selected);
  double energy = partition_energy(p, EnergyKind::Natural);
  return {std::move(p), energy};
}

struct BoundRow {
  int k = 0;
  double lambda_k = std::numeric_limits<double>::quiet_NaN();
  double mu_k = std::numeric_limits<double>::quiet_NaN();
  double lhat_N = std::numeric_limits<double>::quiet_NaN();
  double lhat_D = std::numeric_limits<double>::quiet_NaN();
  int witness_rank_excess = -1;  // rank - (k-1) of the D witness
  // Bounds; NaN when the k-validity condition fails.
  double cor14 = std::numeric_limits<double>::quiet_NaN();
  double cor15 = std::numeric_limits<double>::quiet_NaN();
  double b71 = std::numeric_limits<double>::quiet_NaN();
  double b73 = std::numeric_limits<double>::quiet_NaN();
  double b74 = std::numeric_limits<double>::quiet_NaN();
  double b75 = std::numeric_limits<double>::quiet_NaN();
  // Heuristic interlacing checks (estimates are upper bounds on both sides).
  bool checkA_ran = false, checkA_ok = true;  // Lhat_N_k >= Lhat_D_{k+1-b} - tol
  bool checkB_ran = false, checkB_ok = true;  // Lhat_D_k >= Lhat_N_{k+1-b-l} - tol
  bool b71_ran = false, b71_ok = true;        // heuristic: Lhat_N_k <= (7.1)
  // Rigorous checks.
  bool rigor_mu_ran = false, rigor_mu_ok = true;    // mu_{k+1-b} <= Lhat_D_{k+1-b}
  bool rigor_cor13_ran = false, rigor_cor13_ok = true;  // Lambda_N == lambda_k
  bool rigor_cor15_ran = false, rigor_cor15_ok = true;  // Lhat_D_k >= (cor 1.5)
  bool rigor_b74_ran = false, rigor_b74_ok = true;      // mu_k <= (7.4)
  double cor13_energy = std::numeric_limits<double>::quiet_NaN();
};

struct BoundReport {
  GraphTopology topo;
  int eulerian_n = 1;
  double tol = kIneqRelTol;
  std::vector<BoundRow> rows;

  bool all_rigorous_ok() const {
    for (const BoundRow& r : rows)
      if ((r.rigor_mu_ran && !r.rigor_mu_ok) || (r.rigor_cor13_ran && !r.rigor_cor13_ok) ||
          (r.rigor_cor15_ran && !r.rigor_cor15_ok) || (r.rigor_b74_ran && !r.rigor_b74_ok))
        return false;
    return true;
  }
  bool all_heuristic_ok() const {
    for (const BoundRow& r : rows)
      if ((r.checkA_ran && !r.checkA_ok) || (r.checkB_ran && !r.checkB_ok)) return false;
    return true;
  }
};

struct VerifyOptions {
  int mesh = 8;
  double tol = kIneqRelTol;
  MinimizeOptions minimize;
};

/// Runs the interlacing checks and the bound table for k = 1..kmax.
/// Estimates are upper bounds, so the two estimate-vs-estimate interlacing
/// checks are heuristic; the mu-vs-estimate, Cor-1.3 equality, lower-bound
/// and (7.4) checks are rigorous.
inline BoundReport verify_interlacing(const MetricGraph& g, int kmax,
                                      const VerifyOptions& opts = {}) {
  if (!g.connected()) throw Disconnected("verify needs a connected graph");
  BoundReport rep;
  rep.topo = topology(g);
  rep.eulerian_n = eulerian_cover_count(g);
  rep.tol = opts.tol;
  int beta = rep.topo.betti;
  int leaves = rep.topo.leaves;
  double L = rep.topo.total_length;
  double pi = M_PI;
  int n = rep.eulerian_n;

  Spectrum mu_spec = eigenvalues(all_standard(g), kmax);
  Spectrum la_spec = eigenvalues(all_dirichlet(g), kmax);

  std::map<std::pair<int, int>, EnergyEstimate> memo;  // (k, kind) -> estimate
  auto estimate = [&](int k, EnergyKind kind) -> const EnergyEstimate* {
    if (k < 1 || k > kmax + 1) return nullptr;
    auto key = std::make_pair(k, static_cast<int>(kind));
    auto it = memo.find(key);
    if (it == memo.end()) {
      EnergyEstimate e = minimize_energy(g, k, kind, opts.mesh, opts.minimize);
      it = memo.emplace(key, std::move(e)).first;
    }
    return &it->second;
  };

  for (int k = 1; k <= kmax; ++k) {
    BoundRow row;
    row.k = k;
    row.mu_k = mu_spec.modes[k - 1].lambda;
    row.lambda_k = la_spec.modes[k - 1].lambda;
    const EnergyEstimate* en = estimate(k, EnergyKind::Natural);
    const EnergyEstimate* ed = estimate(k, EnergyKind::Dirichlet);
    if (en) row.lhat_N = en->value;
    if (ed) {
      row.lhat_D = ed->value;
      row.witness_rank_excess = ed->witness.rank - (k - 1);
    }

    // Theorem-level interlacing at estimate level (heuristic).
    if (k >= std::max(beta, 1) && k + 1 - beta >= 1) {
      const EnergyEstimate* rhs = estimate(k + 1 - beta, EnergyKind::Dirichlet);
      if (en && rhs) {
        row.checkA_ran = true;
        row.checkA_ok = en->value >= rhs->value - ineq_slack(rhs->value, opts.tol);
      }
    }
    if (k >= beta + leaves && k + 1 - beta - leaves >= 1) {
      const EnergyEstimate* rhs = estimate(k + 1 - beta - leaves, EnergyKind::Natural);
      if (ed && rhs) {
        row.checkB_ran = true;
        row.checkB_ok = ed->value >= rhs->value - ineq_slack(rhs->value, opts.tol);
      }
    }
    // Rigorous: mu_{k+1-beta} <= Lhat_D_{k+1-beta}.
    if (k + 1 - beta >= 1 && k + 1 - beta <= kmax) {
      const EnergyEstimate* d = estimate(k + 1 - beta, EnergyKind::Dirichlet);
      if (d) {
        double mu = mu_spec.modes[k - beta].lambda;
        row.rigor_mu_ran = true;
        row.rigor_mu_ok = mu <= d->value * (1 + 1e-9) + 1e-9;
      }
    }
    // Rigorous: the constructed partition achieves lambda_k exactly.
    {
      auto [part, energy] = cor13_partition(g, k, row.lambda_k);
      (void)part;
      row.cor13_energy = energy;
      row.rigor_cor13_ran = true;
      row.rigor_cor13_ok =
          std::abs(energy - row.lambda_k) <= 1e-8 * std::max(1.0, row.lambda_k);
    }
    // Bounds.
    if (k >= std::max(n + 1 - beta, 1))
      row.cor14 = pi * pi / (L * L) * std::pow(k + n + beta - 2, 2);
    if (k >= beta + leaves && beta + leaves >= 1)
      row.cor15 = pi * pi / (L * L) * std::pow(k + 1 - beta - leaves, 2);
    if (k >= n) row.b71 = pi * pi / (L * L) * std::pow(k + n - 1, 2);
    row.b73 = pi * pi / (L * L) *
              std::pow(k + g.edge_count() - 1 - leaves / 2, 2);
    row.b74 = pi * pi / (L * L) * std::pow(k + 1.5 * beta + 0.5 * leaves - 2, 2);
    if (k >= beta + leaves)
      row.b75 = pi * pi / (4 * k * L * L) *
                (std::pow(k, 3) + 3 * std::pow(k - beta - leaves, 3));

    if (!std::isnan(row.cor15) && ed) {
      row.rigor_cor15_ran = true;
      row.rigor_cor15_ok = ed->value >= row.cor15 - ineq_slack(row.cor15, 1e-9);
    }
    if (!std::isnan(row.b74)) {
      row.rigor_b74_ran = true;
      row.rigor_b74_ok = row.mu_k <= row.b74 * (1 + 1e-9) + 1e-9;
    }
    if (!std::isnan(row.b71) && en) {
      row.b71_ran = true;
      row.b71_ok = en->value <= row.b71 + ineq_slack(row.b71, opts.tol);
    }
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace mgsp
