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
#include <cmath>

#include "mgsp/catalog.hpp"
#include "mgsp/domains.hpp"

using namespace mgsp;

namespace {
const double pi = M_PI;
}

TEST_CASE("interval: nu = k and xi = k-1") {
  SpectralProblem p = all_standard(catalog::interval(1.0));
  for (int k = 2; k <= 6; ++k) {
    DomainDecomposition nodal = nodal_domains(p, k);
    DomainDecomposition neumann = neumann_domains(p, k);
    REQUIRE(nodal.count == k);
    REQUIRE(neumann.count == k - 1);
    REQUIRE(nodal.generic);
    REQUIRE_FALSE(nodal.degenerate);
  }
}

TEST_CASE("loop second eigenfunction: nu = xi = 2") {
  SpectralProblem p = all_standard(catalog::loop(1.0));
  DomainDecomposition nodal = nodal_domains(p, 2);
  DomainDecomposition neumann = neumann_domains(p, 2);
  REQUIRE(nodal.count == 2);
  REQUIRE(neumann.count == 2);
  REQUIRE_FALSE(nodal.generic);  // double eigenvalue
}

TEST_CASE("first nontrivial mode partitions count as partitions") {
  SpectralProblem p = all_standard(catalog::interval(1.0));
  DomainDecomposition nodal = nodal_domains(p, 3);
  REQUIRE(nodal.partition.k() == 3);
  REQUIRE(rank_bounds_check(nodal.partition));
  // nodal clusters of cos(2 pi x): [0,1/4], [1/4,3/4], [3/4,1]
  double total = 0;
  for (const MetricGraph& c : nodal.partition.clusters) total += c.total_length();
  REQUIRE(total == Catch::Approx(1.0));
}

TEST_CASE("antisymmetric star eigenfunction has a degenerate edge") {
  MetricGraph g = catalog::star(3);
  SpectralProblem p = all_standard(g);
  // u_e = A_e sin(k x) from the center with k = pi/2 and A = (1, -1, 0):
  // standard at leaves (derivative 0 there), continuity 0 at the center,
  // Kirchhoff sum 0.
  Mode m;
  m.k = pi / 2;
  m.lambda = m.k * m.k;
  m.multiplicity = 2;
  m.coef = {TrigPiece{m.k, 0, m.k}, TrigPiece{m.k, 0, -m.k}, TrigPiece{m.k, 0, 0}};
  REQUIRE(vertex_residual(p, m) < 1e-12);
  DomainDecomposition nodal = domain_decomposition(p, m, DomainKind::Nodal);
  REQUIRE(nodal.degenerate);
  REQUIRE_FALSE(nodal.generic);
  REQUIRE(nodal.count == 2);  // the zero edge drops out
}

TEST_CASE("generic star eigenfunction: nu - xi = 1 within the bracket") {
  MetricGraph g = catalog::star(3);
  SpectralProblem p = all_standard(g);
  Spectrum s = eigenvalues(p, 8);
  GraphTopology t = topology(g);
  bool seen_generic = false;
  for (int k = 2; k <= 8; ++k) {
    const Mode& m = s.modes[k - 1];
    if (m.multiplicity != 1) continue;
    DomainDecomposition nodal = domain_decomposition(p, m, DomainKind::Nodal);
    if (!nodal.generic) continue;
    seen_generic = true;
    DomainDecomposition neumann = domain_decomposition(p, m, DomainKind::Neumann);
    int diff = nodal.count - neumann.count;
    REQUIRE(diff >= 1 - t.betti);
    REQUIRE(diff <= t.betti + t.leaves - 1);
  }
  REQUIRE(seen_generic);
}

TEST_CASE("Dirichlet ground state has one nodal domain") {
  MetricGraph g = catalog::interval(1.0);
  SpectralProblem p = with_dirichlet_at(g, {g.vertex_of({0, End::Source})});
  DomainDecomposition nodal = nodal_domains(p, 1);
  REQUIRE(nodal.count == 1);
}
