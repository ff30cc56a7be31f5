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
#include <map>
#include <set>
#include <vector>

#include "mgsp/partition.hpp"
#include "mgsp/spectral.hpp"

namespace mgsp {

namespace detail {

/// Interior zeros / critical points of a trig piece on [0, len]; points within
/// kSnapTol * len of an endpoint are snapped to the vertex and omitted here.
inline std::vector<double> interior_points(const TrigPiece& t, double len, bool zeros,
                                           double amp_scale) {
  std::vector<double> out;
  double snap = kSnapTol * len;
  if (t.amplitude() <= 1e-9 * amp_scale) return out;  // zero edge
  if (t.k == 0) {
    if (zeros && std::abs(t.b) > 1e-9 * amp_scale / len) {
      double x = -t.a / t.b;
      if (x > snap && x < len - snap) out.push_back(x);
    }
    return out;  // a linear piece has no interior critical points
  }
  // u = A cos(kx - phi); zeros at kx = phi + pi/2 + j pi, extrema at kx = phi + j pi.
  double phi = std::atan2(t.b / t.k, t.a);
  double off = zeros ? phi + M_PI / 2 : phi;
  int jlo = static_cast<int>(std::floor((-off) / M_PI)) - 1;
  int jhi = static_cast<int>(std::ceil((t.k * len - off) / M_PI)) + 1;
  for (int j = jlo; j <= jhi; ++j) {
    double x = (off + j * M_PI) / t.k;
    if (x > snap && x < len - snap) out.push_back(x);
  }
  std::sort(out.begin(), out.end());
  return out;
}

struct SubdividedFunction {
  MetricGraph graph;
  PiecewiseTrig fn;
  std::vector<int> dummy_vertices;  // one per interior point, in `graph`
  std::vector<int> vertex_map;      // old vertex index -> new vertex index
};

/// Subdivides the graph at the given interior positions per edge and carries
/// the function across (right pieces re-expanded around their new origin).
inline SubdividedFunction subdivide_with_function(
    const MetricGraph& g, const PiecewiseTrig& f,
    const std::map<EdgeId, std::vector<double>>& points) {
  MetricGraph cur = g;
  PiecewiseTrig fn = f;
  std::vector<EndpointRef> dummy_marks;
  std::vector<EndpointRef> reps;
  for (int v = 0; v < g.vertex_count(); ++v) reps.push_back(g.vertex(v)[0]);

  auto rename = [&](EdgeId old_id, EdgeId left, EdgeId right) {
    for (EndpointRef& r : reps) {
      if (r.edge == old_id && r.end == End::Source) r = {left, End::Source};
      else if (r.edge == old_id && r.end == End::Target) r = {right, End::Target};
    }
    for (EndpointRef& r : dummy_marks) {
      if (r.edge == old_id && r.end == End::Source) r = {left, End::Source};
      else if (r.edge == old_id && r.end == End::Target) r = {right, End::Target};
    }
  };

  for (const auto& [edge, raw] : points) {
    std::vector<double> ps = raw;
    std::sort(ps.begin(), ps.end());
    EdgeId cur_id = edge;
    double base = 0;
    for (double t : ps) {
      double local = t - base;
      const TrigPiece* piece = fn.piece(cur_id);
      TrigPiece left_piece = piece ? *piece : TrigPiece{};
      TrigPiece right_piece = piece ? piece->shifted(local) : TrigPiece{};
      SubdivideResult r = subdivide_ex(cur, cur_id, local);
      rename(cur_id, r.left, r.right);
      fn.parts.erase(cur_id);
      fn.parts[r.left] = left_piece;
      fn.parts[r.right] = right_piece;
      dummy_marks.push_back({r.left, End::Target});
      cur = std::move(r.graph);
      cur_id = r.right;
      base = t;
    }
  }

  SubdividedFunction out{std::move(cur), std::move(fn), {}, {}};
  for (const EndpointRef& m : dummy_marks) out.dummy_vertices.push_back(out.graph.vertex_of(m));
  for (const EndpointRef& r : reps) out.vertex_map.push_back(out.graph.vertex_of(r));
  return out;
}

}  // namespace detail

enum class DomainKind { Nodal, Neumann };

/// Nodal or Neumann decomposition of one eigenfunction: the partition into
/// components of the maximal cut at the non-degenerate zeros (resp. nonzero
/// extrema) of the eigenfunction, restricted to components where it does not
/// vanish identically.
struct DomainDecomposition {
  DomainKind kind = DomainKind::Nodal;
  int count = 0;
  Partition partition;
  bool degenerate = false;  // some edge carries the zero function
  bool generic = false;     // simple, no vertex zero, no degenerate edge
};

inline DomainDecomposition domain_decomposition(const SpectralProblem& p, const Mode& mode,
                                                DomainKind kind) {
  const MetricGraph& g = p.graph;
  PiecewiseTrig f = mode_to_piecewise(g, mode);
  double scale = f.max_amplitude();
  if (scale <= 0) throw DegenerateEigenfunction("eigenfunction vanishes identically");
  bool zeros = kind == DomainKind::Nodal;

  std::set<EdgeId> zero_edges;
  for (int i = 0; i < g.edge_count(); ++i)
    if (mode.coef[i].amplitude() <= 1e-9 * scale) zero_edges.insert(g.edges()[i].id);

  std::map<EdgeId, std::vector<double>> pts;
  for (int i = 0; i < g.edge_count(); ++i) {
    const Edge& e = g.edges()[i];
    auto v = detail::interior_points(mode.coef[i], e.length, zeros, scale);
    if (!v.empty()) pts[e.id] = std::move(v);
  }

  bool vertex_zero_at_standard = false;
  std::vector<int> event_vertices;
  for (int v = 0; v < g.vertex_count(); ++v) {
    double val = f.value_at(g, g.vertex(v)[0]);
    bool all_zero_edges = true;
    for (const EndpointRef& pt : g.vertex(v))
      if (!zero_edges.count(pt.edge)) all_zero_edges = false;
    if (std::abs(val) <= 1e-9 * scale) {
      if (p.condition[v] == VertexCondition::Standard && !all_zero_edges)
        vertex_zero_at_standard = true;
      // Non-degenerate nodal vertex: the function is not identically zero
      // around it.
      if (zeros && !all_zero_edges) event_vertices.push_back(v);
    } else if (!zeros) {
      // Nonzero extremum vertex: every outgoing derivative vanishes.
      bool extremum = true;
      for (const EndpointRef& pt : g.vertex(v))
        if (std::abs(f.outgoing_derivative_at(g, pt)) >
            1e-9 * scale * std::max(1.0, mode.k))
          extremum = false;
      if (extremum && g.degree(v) >= 2) event_vertices.push_back(v);
    }
  }

  auto sub = detail::subdivide_with_function(g, f, pts);
  std::vector<int> cut_at = sub.dummy_vertices;
  for (int v : event_vertices) cut_at.push_back(sub.vertex_map[v]);
  CutRelation rel = maximal_cut(sub.graph, cut_at);

  const MetricGraph& cut = rel.cut();
  auto comp = cut.vertex_components();
  int ncomp = 1 + *std::max_element(comp.begin(), comp.end());
  std::vector<std::vector<EdgeId>> comp_edges(ncomp);
  std::vector<bool> live(ncomp, false);
  for (const Edge& e : cut.edges()) {
    int c = comp[cut.vertex_of({e.id, End::Source})];
    comp_edges[c].push_back(e.id);
    const TrigPiece* t = sub.fn.piece(e.id);
    if (t && t->amplitude() > 1e-9 * scale) live[c] = true;
  }
  std::vector<std::vector<EdgeId>> selected;
  for (int c = 0; c < ncomp; ++c)
    if (live[c]) selected.push_back(comp_edges[c]);
  if (selected.empty()) throw DegenerateEigenfunction("no live component");

  DomainDecomposition out;
  out.kind = kind;
  out.count = static_cast<int>(selected.size());
  out.partition = partition_from_cut(sub.graph, rel, selected);
  out.degenerate = !zero_edges.empty();
  out.generic = mode.multiplicity == 1 && !vertex_zero_at_standard && zero_edges.empty();
  return out;
}

/// Genericity of one mode: simple eigenvalue, no zero at a standard vertex,
/// no identically-zero edge.
inline bool mode_is_generic(const SpectralProblem& p, const Mode& mode) {
  if (mode.multiplicity != 1) return false;
  PiecewiseTrig f = mode_to_piecewise(p.graph, mode);
  double scale = f.max_amplitude();
  if (scale <= 0) return false;
  for (const TrigPiece& t : mode.coef)
    if (t.amplitude() <= 1e-9 * scale) return false;
  for (int v = 0; v < p.graph.vertex_count(); ++v) {
    if (p.condition[v] != VertexCondition::Standard) continue;
    if (std::abs(f.value_at(p.graph, p.graph.vertex(v)[0])) <= 1e-9 * scale) return false;
  }
  return true;
}

/// Nodal domains of the eigen_index-th eigenfunction (1-based).
inline DomainDecomposition nodal_domains(const SpectralProblem& p, int eigen_index) {
  Spectrum s = eigenvalues(p, eigen_index);
  return domain_decomposition(p, s.modes.at(eigen_index - 1), DomainKind::Nodal);
}

/// Neumann domains of the eigen_index-th eigenfunction (1-based).
inline DomainDecomposition neumann_domains(const SpectralProblem& p, int eigen_index) {
  Spectrum s = eigenvalues(p, eigen_index);
  return domain_decomposition(p, s.modes.at(eigen_index - 1), DomainKind::Neumann);
}

}  // namespace mgsp
