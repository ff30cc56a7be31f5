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
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "mgsp/graph.hpp"

namespace mgsp {

enum class VertexCondition { Standard, Dirichlet };

/// Laplacian eigenvalue problem on a metric graph with one condition per
/// vertex: Dirichlet (value zero) or standard (continuity + Kirchhoff).
struct SpectralProblem {
  MetricGraph graph;
  std::vector<VertexCondition> condition;  // indexed like graph.vertices()

  SpectralProblem() = default;
  SpectralProblem(MetricGraph g, std::vector<VertexCondition> c)
      : graph(std::move(g)), condition(std::move(c)) {
    if (condition.size() != static_cast<std::size_t>(graph.vertex_count()))
      throw Error("one condition per vertex required");
  }

  std::vector<int> dirichlet_vertices() const {
    std::vector<int> out;
    for (std::size_t i = 0; i < condition.size(); ++i)
      if (condition[i] == VertexCondition::Dirichlet) out.push_back(static_cast<int>(i));
    return out;
  }
};

inline SpectralProblem all_standard(const MetricGraph& g) {
  return SpectralProblem(g, std::vector<VertexCondition>(g.vertex_count(),
                                                         VertexCondition::Standard));
}

inline SpectralProblem all_dirichlet(const MetricGraph& g) {
  return SpectralProblem(g, std::vector<VertexCondition>(g.vertex_count(),
                                                         VertexCondition::Dirichlet));
}

inline SpectralProblem with_dirichlet_at(const MetricGraph& g, const std::vector<int>& vd) {
  std::vector<VertexCondition> c(g.vertex_count(), VertexCondition::Standard);
  for (int v : vd) c.at(v) = VertexCondition::Dirichlet;
  return SpectralProblem(g, std::move(c));
}

// ---------------------------------------------------------------------------
// Per-edge trigonometric pieces. u_e(x) = a cos(kx) + b sin(kx)/k, with the
// k -> 0 limit u_e(x) = a + b x. The sin(kx)/k scaling keeps coefficients
// O(L) near k = 0.
// ---------------------------------------------------------------------------

struct TrigPiece {
  double k = 0;
  double a = 0;
  double b = 0;

  double value(double x) const {
    if (k == 0) return a + b * x;
    return a * std::cos(k * x) + b * std::sin(k * x) / k;
  }
  double derivative(double x) const {
    if (k == 0) return b;
    return -a * k * std::sin(k * x) + b * std::cos(k * x);
  }
  double amplitude() const {
    if (k == 0) return std::abs(a) + std::abs(b);
    return std::hypot(a, b / k);
  }
  /// L2 norms on [0, len]: returns {int u^2, int u'^2}.
  std::pair<double, double> norms(double len) const {
    if (k == 0) {
      double u2 = a * a * len + a * b * len * len + b * b * len * len * len / 3.0;
      return {u2, b * b * len};
    }
    double s2 = std::sin(2 * k * len) / (4 * k);
    double icc = len / 2 + s2;
    double iss = len / 2 - s2;
    double sl = std::sin(k * len);
    double ics = sl * sl / (2 * k);
    double u2 = a * a * icc + 2 * a * (b / k) * ics + (b / k) * (b / k) * iss;
    double du2 = a * a * k * k * iss - 2 * a * b * k * ics + b * b * icc;
    return {u2, du2};
  }
  /// Piece shifted to start at x = t: u(t + x) in the same basis.
  TrigPiece shifted(double t) const { return TrigPiece{k, value(t), derivative(t)}; }
};

/// A function on a graph given per edge; edges without an entry are zero.
struct PiecewiseTrig {
  std::map<EdgeId, TrigPiece> parts;

  const TrigPiece* piece(EdgeId e) const {
    auto it = parts.find(e);
    return it == parts.end() ? nullptr : &it->second;
  }
  double value_at(const MetricGraph& g, const EndpointRef& p) const {
    const TrigPiece* t = piece(p.edge);
    if (!t) return 0.0;
    return p.end == End::Source ? t->value(0) : t->value(g.edge(p.edge).length);
  }
  /// Derivative pointing out of the vertex into the edge.
  double outgoing_derivative_at(const MetricGraph& g, const EndpointRef& p) const {
    const TrigPiece* t = piece(p.edge);
    if (!t) return 0.0;
    return p.end == End::Source ? t->derivative(0)
                                : -t->derivative(g.edge(p.edge).length);
  }
  double max_amplitude() const {
    double m = 0;
    for (auto& [e, t] : parts) m = std::max(m, t.amplitude());
    return m;
  }
};

/// Rayleigh quotient of a piecewise-trig function, continuous at vertices.
inline double rayleigh(const MetricGraph& g, const PiecewiseTrig& f) {
  double scale = f.max_amplitude();
  if (scale <= 0) throw ZeroFunction();
  for (int v = 0; v < g.vertex_count(); ++v) {
    double v0 = f.value_at(g, g.vertex(v)[0]);
    for (const EndpointRef& p : g.vertex(v))
      if (std::abs(f.value_at(g, p) - v0) > 1e-6 * scale)
        throw Error("rayleigh: function is discontinuous at a vertex");
  }
  double num = 0, den = 0;
  for (auto& [e, t] : f.parts) {
    auto [u2, du2] = t.norms(g.edge(e).length);
    den += u2;
    num += du2;
  }
  if (den <= kLengthTol * scale * scale) throw ZeroFunction();
  return num / den;
}

// ---------------------------------------------------------------------------
// Secular matrix. Unknowns per edge: (a_e, bt_e) with b_e = bt_e * max(1,k),
// so all matrix entries stay O(max(L,1)) across the whole k range. Rows:
// Dirichlet vertex of degree d gives d value rows; standard vertex gives d-1
// continuity rows plus one Kirchhoff row scaled by 1/max(1,k).
// ---------------------------------------------------------------------------

namespace detail {

struct EndpointCoef {
  double va, vb;  // value row coefficients for (a, bt)
  double da, db;  // outgoing-derivative coefficients, already 1/max(1,k) scaled
};

inline EndpointCoef endpoint_coef(double k, double len, End end) {
  double km = std::max(1.0, k);
  EndpointCoef c{};
  if (end == End::Source) {
    c.va = 1.0;
    c.vb = 0.0;
    c.da = 0.0;
    c.db = km / km;  // derivative b-coef is b = bt*km, row scaled by 1/km
  } else {
    double cl = std::cos(k * len), sl = std::sin(k * len);
    c.va = cl;
    c.vb = sl * km / k;
    c.da = k * sl / km;
    c.db = -cl * km / km;
  }
  return c;
}

inline Eigen::MatrixXd secular_matrix(const SpectralProblem& p, double k) {
  const MetricGraph& g = p.graph;
  int n = g.edge_count();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  std::map<EdgeId, int> col;
  for (int i = 0; i < n; ++i) col[g.edges()[i].id] = 2 * i;
  int row = 0;
  for (int v = 0; v < g.vertex_count(); ++v) {
    const Vertex& vert = g.vertex(v);
    if (p.condition[v] == VertexCondition::Dirichlet) {
      for (const EndpointRef& pt : vert) {
        EndpointCoef c = endpoint_coef(k, g.edge(pt.edge).length, pt.end);
        m(row, col[pt.edge]) = c.va;
        m(row, col[pt.edge] + 1) = c.vb;
        ++row;
      }
    } else {
      EndpointCoef c0 = endpoint_coef(k, g.edge(vert[0].edge).length, vert[0].end);
      for (std::size_t i = 1; i < vert.size(); ++i) {
        EndpointCoef ci = endpoint_coef(k, g.edge(vert[i].edge).length, vert[i].end);
        m(row, col[vert[0].edge]) += c0.va;
        m(row, col[vert[0].edge] + 1) += c0.vb;
        m(row, col[vert[i].edge]) -= ci.va;
        m(row, col[vert[i].edge] + 1) -= ci.vb;
        ++row;
      }
      for (const EndpointRef& pt : vert) {
        EndpointCoef c = endpoint_coef(k, g.edge(pt.edge).length, pt.end);
        m(row, col[pt.edge]) += c.da;
        m(row, col[pt.edge] + 1) += c.db;
      }
      ++row;
    }
  }
  return m;
}

inline double matrix_norm1(const Eigen::MatrixXd& m) {
  return m.cwiseAbs().colwise().sum().maxCoeff();
}

template <typename F>
double golden_min(F&& f, double a, double b, double tol) {
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - gr * (b - a);
  double d = a + gr * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = f(d);
    }
  }
  return (a + b) / 2;
}

}  // namespace detail

/// Smallest singular value of the vertex-condition matrix M(k); zero exactly
/// at eigenvalues lambda = k^2, with the number of near-zero singular values
/// equal to the multiplicity.
inline double secular_sigma(const SpectralProblem& p, double k) {
  Eigen::MatrixXd m = detail::secular_matrix(p, k);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues()(m.rows() - 1);
}

struct Mode {
  double lambda = 0;
  double k = 0;
  int multiplicity = 1;
  std::vector<TrigPiece> coef;  // aligned with graph.edges()
};

struct Spectrum {
  std::vector<Mode> modes;  // ascending; eigenvalues repeated per multiplicity

  std::vector<double> eigenvalues() const {
    std::vector<double> v;
    for (const Mode& m : modes) v.push_back(m.lambda);
    return v;
  }
};

inline PiecewiseTrig mode_to_piecewise(const MetricGraph& g, const Mode& m) {
  PiecewiseTrig f;
  for (int i = 0; i < g.edge_count(); ++i) f.parts[g.edges()[i].id] = m.coef[i];
  return f;
}

/// Max vertex-condition residual of the mode (rows normalized, |u| L2 = 1).
inline double vertex_residual(const SpectralProblem& p, const Mode& m) {
  PiecewiseTrig f = mode_to_piecewise(p.graph, m);
  const MetricGraph& g = p.graph;
  double scale = std::max(f.max_amplitude(), 1e-300);
  double worst = 0;
  for (int v = 0; v < g.vertex_count(); ++v) {
    const Vertex& vert = g.vertex(v);
    if (p.condition[v] == VertexCondition::Dirichlet) {
      for (const EndpointRef& pt : vert)
        worst = std::max(worst, std::abs(f.value_at(g, pt)) / scale);
    } else {
      double v0 = f.value_at(g, vert[0]);
      double ksum = 0;
      for (const EndpointRef& pt : vert) {
        worst = std::max(worst, std::abs(f.value_at(g, pt) - v0) / scale);
        ksum += f.outgoing_derivative_at(g, pt);
      }
      worst = std::max(worst, std::abs(ksum) / (scale * std::max(1.0, m.k)));
    }
  }
  return worst;
}

namespace detail {

struct Root {
  double k;
  int multiplicity;
};

/// Scans sigma(k) on (0, kmax] and polishes every local minimum that dips
/// under the singular-value threshold. Stops early once max_roots roots
/// (counted with multiplicity) have been collected.
inline std::vector<Root> scan_roots(const SpectralProblem& p, double kmax, double dk,
                                    int max_roots = std::numeric_limits<int>::max()) {
  std::vector<Root> roots;
  int found = 0;
  auto sigma = [&](double k) { return secular_sigma(p, k); };
  int npts = static_cast<int>(std::ceil(kmax / dk)) + 1;
  double prev2 = -1, prev1 = -1;
  double kprev2 = 0, kprev1 = 0;
  for (int i = 1; i <= npts + 1; ++i) {
    if (found >= max_roots) break;
    double k = i * dk;
    double s = sigma(k);
    if (prev2 >= 0 && prev1 <= prev2 && prev1 < s) {
      double lo = kprev2, hi = k;
      double kr = golden_min(sigma, lo, hi, 1e-13 * std::max(1.0, hi));
      Eigen::MatrixXd m = secular_matrix(p, kr);
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
      // The matrix can vanish entirely at an eigenvalue (a loop at k = 2 pi j
      // has two identically-zero rows), so the threshold keeps a unit floor.
      double thresh = kSigmaTol * std::max(matrix_norm1(m), 1.0);
      int mult = 0;
      for (int j = m.rows() - 1; j >= 0; --j) {
        if (svd.singularValues()(j) < thresh) ++mult;
        else break;
      }
      if (mult > 0 && kr > 1e-12) {
        if (roots.empty() || kr - roots.back().k > 1e-9 * std::max(1.0, kr)) {
          roots.push_back({kr, mult});
          found += mult;
        }
      }
    }
    prev2 = prev1;
    kprev2 = kprev1;
    prev1 = s;
    kprev1 = k;
  }
  // Keep only roots within the requested window (the scan runs one point past).
  while (!roots.empty() && roots.back().k > kmax) roots.pop_back();
  return roots;
}

inline std::vector<Mode> modes_at(const SpectralProblem& p, double k, int multiplicity) {
  Eigen::MatrixXd m = secular_matrix(p, k);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
  int n = p.graph.edge_count();
  std::vector<Mode> out;
  double km = std::max(1.0, k);
  for (int j = 0; j < multiplicity; ++j) {
    Eigen::VectorXd x = svd.matrixV().col(2 * n - 1 - j);
    Mode mode;
    mode.k = k;
    mode.lambda = k * k;
    mode.multiplicity = multiplicity;
    mode.coef.resize(n);
    double l2 = 0;
    for (int i = 0; i < n; ++i) {
      TrigPiece t{k, x(2 * i), x(2 * i + 1) * km};
      l2 += t.norms(p.graph.edges()[i].length).first;
      mode.coef[i] = t;
    }
    double inv = 1.0 / std::sqrt(std::max(l2, 1e-300));
    for (TrigPiece& t : mode.coef) {
      t.a *= inv;
      t.b *= inv;
    }
    out.push_back(std::move(mode));
  }
  return out;
}

/// Constant modes on components without a Dirichlet vertex.
inline std::vector<Mode> zero_modes(const SpectralProblem& p) {
  const MetricGraph& g = p.graph;
  auto comp = g.vertex_components();
  int nc = g.vertex_count() ? 1 + *std::max_element(comp.begin(), comp.end()) : 0;
  std::vector<bool> has_dirichlet(nc, false);
  for (int v = 0; v < g.vertex_count(); ++v)
    if (p.condition[v] == VertexCondition::Dirichlet) has_dirichlet[comp[v]] = true;
  std::vector<double> comp_len(nc, 0.0);
  for (const Edge& e : g.edges())
    comp_len[comp[g.vertex_of({e.id, End::Source})]] += e.length;
  std::vector<Mode> out;
  for (int c = 0; c < nc; ++c) {
    if (has_dirichlet[c]) continue;
    Mode m;
    m.lambda = 0;
    m.k = 0;
    m.coef.resize(g.edge_count());
    double inv = 1.0 / std::sqrt(comp_len[c]);
    for (int i = 0; i < g.edge_count(); ++i) {
      const Edge& e = g.edges()[i];
      if (comp[g.vertex_of({e.id, End::Source})] == c) m.coef[i] = TrigPiece{0, inv, 0};
      else m.coef[i] = TrigPiece{0, 0, 0};
    }
    out.push_back(std::move(m));
  }
  for (Mode& m : out) m.multiplicity = static_cast<int>(out.size());
  return out;
}

}  // namespace detail

struct SolverOptions {
  int grid_per_mean_spacing = 20;  // scan step = pi / (this * L)
  int max_grid_refinements = 2;
  bool check_residuals = true;
};

/// First n eigenvalues (with multiplicity) and eigenvectors. lambda = 0 is
/// handled analytically; positive eigenvalues come from scanning the smallest
/// singular value of M(k) and polishing each minimum.
inline Spectrum eigenvalues(const SpectralProblem& p, int n,
                            const SolverOptions& opts = {}) {
  if (n < 1) throw Error("need n >= 1");
  Spectrum spec;
  for (Mode& m : detail::zero_modes(p)) spec.modes.push_back(std::move(m));
  double L = p.graph.total_length();
  double dk = M_PI / (opts.grid_per_mean_spacing * L);
  int need = n - static_cast<int>(spec.modes.size());
  if (need > 0) {
    // Weyl-safe window: the count up to k is L k / pi + O(|E| + |V|).
    double kmax =
        M_PI * (n + 2 * p.graph.edge_count() + p.graph.vertex_count() + 4) / L;
    std::vector<detail::Root> roots;
    int refines = 0;
    for (;;) {
      roots = detail::scan_roots(p, kmax, dk, need);
      int found = 0;
      for (const auto& r : roots) found += r.multiplicity;
      if (found >= need) break;
      if (refines++ >= opts.max_grid_refinements)
        throw RootIsolationFailure("found " + std::to_string(found) +
                                   " roots, need " + std::to_string(need));
      dk /= 2;
    }
    for (const auto& r : roots) {
      if (static_cast<int>(spec.modes.size()) >= n) break;
      for (Mode& m : detail::modes_at(p, r.k, r.multiplicity)) {
        if (static_cast<int>(spec.modes.size()) >= n) break;
        spec.modes.push_back(std::move(m));
      }
    }
  }
  spec.modes.resize(std::min<std::size_t>(spec.modes.size(), n));
  if (opts.check_residuals) {
    for (const Mode& m : spec.modes) {
      double r = vertex_residual(p, m);
      if (r > kResidualTol)
        throw RootIsolationFailure("eigenvector residual " + std::to_string(r));
    }
  }
  return spec;
}

/// # of eigenvalues <= cutoff (counted with multiplicity).
inline int count_eigenvalues(const SpectralProblem& p, double cutoff,
                             const SolverOptions& opts = {}) {
  int count = static_cast<int>(detail::zero_modes(p).size());
  if (cutoff < 0) return 0;
  double kmax = std::sqrt(cutoff);
  if (kmax <= 0) return count;
  double dk = M_PI / (opts.grid_per_mean_spacing * p.graph.total_length());
  for (const auto& r : detail::scan_roots(p, kmax, dk))
    if (r.k * r.k <= cutoff) count += r.multiplicity;
  return count;
}

/// First nontrivial eigenvalue with standard conditions everywhere.
inline double mu2(const MetricGraph& g) {
  if (!g.connected()) throw Disconnected("mu2 requires a connected graph");
  return eigenvalues(all_standard(g), 2).modes[1].lambda;
}

/// First eigenvalue with Dirichlet conditions on vd, standard elsewhere.
inline double lambda1(const MetricGraph& g, const std::vector<int>& vd) {
  if (vd.empty()) throw EmptyDirichletSet();
  return eigenvalues(with_dirichlet_at(g, vd), 1).modes[0].lambda;
}

// ---------------------------------------------------------------------------
// Canonical smoothing of spectral problems: removing standard dummy vertices
// does not change the spectrum and shrinks the secular matrix.
// ---------------------------------------------------------------------------

inline SpectralProblem smooth_standard_dummies(const SpectralProblem& p) {
  SpectralProblem cur = p;
  for (;;) {
    int pick = -1;
    for (int v = 0; v < cur.graph.vertex_count(); ++v) {
      if (cur.condition[v] == VertexCondition::Standard && smoothable(cur.graph, v)) {
        pick = v;
        break;
      }
    }
    if (pick < 0) return cur;
    MetricGraph next = smooth(cur.graph, pick);
    // Conditions carry over by matching each surviving vertex through the
    // endpoint renames done by smooth().
    const Vertex& rv = cur.graph.vertex(pick);
    EndpointRef p0 = rv[0], p1 = rv[1];
    EndpointRef first = p0, second = p1;
    if (first.end == End::Source && second.end == End::Target) std::swap(first, second);
    EndpointRef outer_first{first.edge, opposite(first.end)};
    EndpointRef outer_second{second.edge, opposite(second.end)};
    EdgeId merged = next.fresh_edge_id() - 1;
    std::vector<VertexCondition> cond(next.vertex_count(), VertexCondition::Standard);
    for (int v = 0; v < cur.graph.vertex_count(); ++v) {
      if (v == pick) continue;
      EndpointRef rep = cur.graph.vertex(v)[0];
      if (rep == outer_first) rep = {merged, End::Source};
      else if (rep == outer_second) rep = {merged, End::Target};
      cond[next.vertex_of(rep)] = cur.condition[v];
    }
    cur = SpectralProblem(std::move(next), std::move(cond));
  }
}

}  // namespace mgsp
