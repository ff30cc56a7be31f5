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
#include <vector>

#include <Eigen/Dense>

#include "mgsp/spectral.hpp"

namespace mgsp {

/// Piecewise-linear finite element discretization of the same eigenvalue
/// problem: shared unknowns at standard vertices (continuity built in,
/// Kirchhoff natural), eliminated unknowns at Dirichlet vertices. O(h^2)
/// accurate; used as the independent oracle for the secular solver.
inline std::vector<double> fem_eigenvalues(const SpectralProblem& p, int n,
                                           int elements_per_unit_length) {
  if (n < 1) throw Error("need n >= 1");
  if (elements_per_unit_length < 8)
    throw Error("need at least 8 elements per unit length");
  const MetricGraph& g = p.graph;

  // Degrees of freedom: one per standard vertex, none at Dirichlet vertices,
  // plus the interior nodes of each edge.
  std::vector<int> vertex_dof(g.vertex_count(), -1);
  int ndof = 0;
  for (int v = 0; v < g.vertex_count(); ++v)
    if (p.condition[v] == VertexCondition::Standard) vertex_dof[v] = ndof++;

  struct EdgeMesh {
    int cells;
    double h;
    int first_interior;  // dof index of the first interior node, -1 if none
  };
  std::vector<EdgeMesh> mesh(g.edge_count());
  for (int i = 0; i < g.edge_count(); ++i) {
    const Edge& e = g.edges()[i];
    int cells = std::max(2, static_cast<int>(std::lround(e.length * elements_per_unit_length)));
    mesh[i] = {cells, e.length / cells, cells > 1 ? ndof : -1};
    ndof += cells - 1;
  }
  if (ndof == 0) throw SingularMass("no degrees of freedom");

  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(ndof, ndof);
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(ndof, ndof);
  for (int i = 0; i < g.edge_count(); ++i) {
    const Edge& e = g.edges()[i];
    const EdgeMesh& em = mesh[i];
    // Node dof indices along the edge; -1 marks an eliminated Dirichlet node.
    std::vector<int> node(em.cells + 1);
    node[0] = vertex_dof[g.vertex_of({e.id, End::Source})];
    node[em.cells] = vertex_dof[g.vertex_of({e.id, End::Target})];
    for (int j = 1; j < em.cells; ++j) node[j] = em.first_interior + j - 1;
    double h = em.h;
    for (int c = 0; c < em.cells; ++c) {
      int a = node[c], b = node[c + 1];
      double kl[2][2] = {{1 / h, -1 / h}, {-1 / h, 1 / h}};
      double ml[2][2] = {{h / 3, h / 6}, {h / 6, h / 3}};
      int idx[2] = {a, b};
      for (int r = 0; r < 2; ++r)
        for (int s = 0; s < 2; ++s) {
          if (idx[r] < 0 || idx[s] < 0) continue;
          K(idx[r], idx[s]) += kl[r][s];
          M(idx[r], idx[s]) += ml[r][s];
        }
    }
  }

  Eigen::LLT<Eigen::MatrixXd> llt(M);
  if (llt.info() != Eigen::Success) throw SingularMass("mass matrix not SPD");
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(K, M);
  if (solver.info() != Eigen::Success) throw Error("FEM eigensolver failed");

  std::vector<double> out;
  double scale = std::max(1.0, solver.eigenvalues().cwiseAbs().maxCoeff());
  for (int i = 0; i < std::min<int>(n, ndof); ++i) {
    double lam = solver.eigenvalues()(i);
    if (std::abs(lam) < 1e-10 * scale) lam = 0.0;
    out.push_back(lam);
  }
  return out;
}

/// Richardson extrapolation over meshes h and h/2 of the O(h^2) FEM values.
inline std::vector<double> fem_eigenvalues_extrapolated(const SpectralProblem& p, int n,
                                                        int elements_per_unit_length) {
  std::vector<double> coarse = fem_eigenvalues(p, n, elements_per_unit_length);
  std::vector<double> fine = fem_eigenvalues(p, n, 2 * elements_per_unit_length);
  std::vector<double> out(std::min(coarse.size(), fine.size()));
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = (4 * fine[i] - coarse[i]) / 3;
  return out;
}

}  // namespace mgsp
