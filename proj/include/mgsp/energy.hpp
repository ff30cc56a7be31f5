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

#include <cstdio>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "mgsp/partition.hpp"
#include "mgsp/spectral.hpp"

namespace mgsp {

enum class EnergyKind { Dirichlet, Natural };

namespace detail {

inline std::string quantized(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12e", x);
  return buf;
}

/// Deterministic relabeling key. Two problems with equal keys are identical
/// up to relabeling and orientation, hence isospectral; distinct problems may
/// still get distinct keys (a missed cache hit, never a wrong one).
inline std::string problem_key(const SpectralProblem& p, int needed) {
  const MetricGraph& g = p.graph;
  int n = g.edge_count();
  // Signature per edge: length + sorted (degree, condition) of its endpoints.
  struct Sig {
    std::string text;
    EdgeId id;
  };
  std::vector<Sig> sigs;
  for (const Edge& e : g.edges()) {
    int vs = g.vertex_of({e.id, End::Source});
    int vt = g.vertex_of({e.id, End::Target});
    auto vsig = [&](int v) {
      return std::to_string(g.degree(v)) +
             (p.condition[v] == VertexCondition::Dirichlet ? "D" : "S");
    };
    std::string a = vsig(vs), b = vsig(vt);
    if (b < a) std::swap(a, b);
    sigs.push_back({quantized(e.length) + "|" + a + b, e.id});
  }
  std::sort(sigs.begin(), sigs.end(), [](const Sig& x, const Sig& y) {
    return x.text != y.text ? x.text < y.text : x.id < y.id;
  });
  std::map<EdgeId, int> relabel;
  for (int i = 0; i < n; ++i) relabel[sigs[i].id] = i;
  std::string key = std::to_string(needed) + ";";
  for (const Sig& s : sigs) key += s.text + ";";
  std::vector<std::string> verts;
  for (int v = 0; v < g.vertex_count(); ++v) {
    std::vector<std::pair<int, int>> pts;
    for (const EndpointRef& pt : g.vertex(v))
      pts.push_back({relabel[pt.edge], static_cast<int>(pt.end)});
    std::sort(pts.begin(), pts.end());
    std::string vs = p.condition[v] == VertexCondition::Dirichlet ? "D" : "S";
    for (auto& [e, end] : pts) vs += std::to_string(e) + (end ? "t" : "s") + ",";
    verts.push_back(vs);
  }
  std::sort(verts.begin(), verts.end());
  for (const std::string& v : verts) key += v + "/";
  return key;
}

/// First eigenvalue of a star-shaped problem (a standard center with pendant
/// legs) through the scalar secular function
///   G(k) = sum_i g_i(k l_i) prod_{j != i} h_j(k l_j),
/// with (h, g) = (cos, sin) at standard tips and (sin, -cos) at Dirichlet
/// tips. Multiple eigenvalues of equilateral stars are even-order touch
/// zeros of G, so the scan looks for sign changes and for near-zero minima
/// of |G|. Returns nothing when the problem is not of this shape.
inline std::optional<double> star_first_eigenvalue(const SpectralProblem& sp,
                                                   EnergyKind kind) {
  const MetricGraph& g = sp.graph;
  int n = g.edge_count();
  if (n < 2 || g.vertex_count() != n + 1) return std::nullopt;
  int center = 0;
  for (int v = 1; v < g.vertex_count(); ++v)
    if (g.degree(v) > g.degree(center)) center = v;
  if (g.degree(center) != n) return std::nullopt;
  struct Leg {
    double len;
    bool dirichlet_tip;
  };
  std::vector<Leg> legs;
  for (const Edge& e : g.edges()) {
    int vs = g.vertex_of({e.id, End::Source});
    int vt = g.vertex_of({e.id, End::Target});
    if (vs == vt) return std::nullopt;  // loop at the center
    int tip = vs == center ? vt : vs;
    if ((vs == center) == (vt == center) || g.degree(tip) != 1) return std::nullopt;
    legs.push_back({e.length, sp.condition[tip] == VertexCondition::Dirichlet});
  }
  if (sp.condition[center] == VertexCondition::Dirichlet) {
    // Legs decouple into intervals with Dirichlet at the center end.
    double best = std::numeric_limits<double>::infinity();
    for (const Leg& l : legs) {
      double lam = l.dirichlet_tip ? M_PI * M_PI / (l.len * l.len)
                                   : M_PI * M_PI / (4 * l.len * l.len);
      best = std::min(best, lam);
    }
    return best;
  }
  bool any_dirichlet = false;
  for (const Leg& l : legs) any_dirichlet |= l.dirichlet_tip;
  if (kind == EnergyKind::Dirichlet && !any_dirichlet) return std::nullopt;

  auto G = [&](double k) {
    std::vector<double> h(legs.size()), gg(legs.size());
    for (std::size_t i = 0; i < legs.size(); ++i) {
      double s = std::sin(k * legs[i].len), c = std::cos(k * legs[i].len);
      h[i] = legs[i].dirichlet_tip ? s : c;
      gg[i] = legs[i].dirichlet_tip ? -c : s;
    }
    double total = 0;
    for (std::size_t i = 0; i < legs.size(); ++i) {
      double rest = 1;
      for (std::size_t j = 0; j < legs.size(); ++j)
        if (j != i) rest *= h[j];
      total += gg[i] * rest;
    }
    return total;
  };

  double L = g.total_length();
  double min_leg = legs[0].len;
  for (const Leg& l : legs) min_leg = std::min(min_leg, l.len);
  double klo = 0.99 * (any_dirichlet ? M_PI / (2 * L) : M_PI / L);
  double khi = 2 * M_PI / min_leg + M_PI / L;
  double dk = M_PI / (40 * L);
  double gscale = 1e-2;
  double pk = klo, pv = G(klo);
  double mk = pk, mv = std::abs(pv), ppv = std::abs(pv);
  bool have_mid = false;
  for (double k = klo + dk; k <= khi; k += dk) {
    double v = G(k);
    gscale = std::max(gscale, std::abs(v));
    if ((pv < 0) != (v < 0)) {
      double a = pk, b = k, fa = pv;
      for (int it = 0; it < 80; ++it) {
        double m = (a + b) / 2, fm = G(m);
        if ((fa < 0) == (fm < 0)) {
          a = m;
          fa = fm;
        } else {
          b = m;
        }
      }
      double kr = (a + b) / 2;
      return kr * kr;
    }
    if (have_mid && mv <= ppv && mv < std::abs(v) && mv < 1e-4 * gscale) {
      // Candidate touch zero: polish the |G| minimum.
      double kr = detail::golden_min([&](double x) { return std::abs(G(x)); },
                                     mk - dk, mk + dk, 1e-13 * std::max(1.0, mk));
      if (std::abs(G(kr)) < 1e-10 * gscale) return kr * kr;
    }
    ppv = mv;
    mk = k;
    mv = std::abs(v);
    have_mid = true;
    pk = k;
    pv = v;
  }
  return std::nullopt;  // fall back to the generic solver
}

inline double solve_smoothed(const SpectralProblem& sp, EnergyKind kind) {
  const MetricGraph& g = sp.graph;
  double pi = M_PI;
  if (g.edge_count() == 1) {
    double len = g.edges()[0].length;
    if (g.vertex_count() == 2) {  // interval
      int d = static_cast<int>(sp.dirichlet_vertices().size());
      if (kind == EnergyKind::Dirichlet) {
        if (d == 2) return pi * pi / (len * len);
        if (d == 1) return pi * pi / (4 * len * len);
        return 0.0;
      }
      return pi * pi / (len * len);  // mu2 of an interval
    }
    // loop on a single edge
    bool dirichlet = !sp.dirichlet_vertices().empty();
    if (kind == EnergyKind::Dirichlet)
      return dirichlet ? pi * pi / (len * len) : 0.0;
    return 4 * pi * pi / (len * len);
  }
  static std::map<std::string, double> cache;
  static std::mutex mutex;
  int needed = kind == EnergyKind::Dirichlet ? 1 : 2;
  std::string key = problem_key(sp, needed);
  {
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  double value = eigenvalues(sp, needed).modes[needed - 1].lambda;
  std::lock_guard<std::mutex> lock(mutex);
  cache[key] = value;
  return value;
}

}  // namespace detail

/// Spectral problem of one cluster under the given energy: Dirichlet at the
/// cluster boundary for the D energy, standard everywhere for the N energy.
inline SpectralProblem cluster_problem(const MetricGraph& cluster,
                                       const std::vector<int>& boundary,
                                       EnergyKind kind) {
  if (kind == EnergyKind::Natural) return all_standard(cluster);
  return with_dirichlet_at(cluster, boundary);
}

/// lambda_1 (Dirichlet at boundary) or mu_2 (standard) of a cluster, with
/// closed forms for intervals and loops after smoothing standard dummies.
/// A Dirichlet cluster with empty boundary has energy 0 (the first standard
/// eigenvalue); this happens only for the trivial 1-partition.
inline double cluster_energy(const MetricGraph& cluster, const std::vector<int>& boundary,
                             EnergyKind kind) {
  if (kind == EnergyKind::Dirichlet && boundary.empty()) return 0.0;
  SpectralProblem sp = smooth_standard_dummies(cluster_problem(cluster, boundary, kind));
  return detail::solve_smoothed(sp, kind);
}

/// Max cluster energy of the partition under the given kind.
inline double partition_energy(const Partition& p, EnergyKind kind) {
  double worst = 0;
  for (int i = 0; i < p.k(); ++i)
    worst = std::max(worst, cluster_energy(p.clusters[i], p.cluster_boundaries[i], kind));
  return worst;
}

}  // namespace mgsp
