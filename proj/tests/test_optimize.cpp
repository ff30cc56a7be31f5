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
#include "mgsp/optimize.hpp"

using namespace mgsp;

namespace {
const double pi = M_PI;
const double pi2 = M_PI * M_PI;
}

TEST_CASE("eulerian cover counts") {
  REQUIRE(eulerian_cover_count(catalog::loop(1.0)) == 1);
  REQUIRE(eulerian_cover_count(catalog::interval(1.0)) == 1);
  REQUIRE(eulerian_cover_count(catalog::star(3)) == 2);
  REQUIRE(eulerian_cover_count(catalog::figure8()) == 1);
  REQUIRE(eulerian_cover_count(catalog::pumpkin_dumbbell()) == 1);
  REQUIRE(eulerian_cover_count(catalog::windmill(1)) == 1);
}

TEST_CASE("interval energies") {
  MetricGraph g = catalog::interval(1.0);
  SECTION("Dirichlet k=1 is the trivial zero") {
    EnergyEstimate e = minimize_energy(g, 1, EnergyKind::Dirichlet);
    REQUIRE(e.value == 0.0);
    REQUIRE(e.witness.k() == 1);
  }
  SECTION("Dirichlet k: pi^2 (k-1)^2, quarter-wave end clusters") {
    for (int k : {2, 3, 4}) {
      EnergyEstimate e = minimize_energy(g, k, EnergyKind::Dirichlet);
      REQUIRE(e.value == Catch::Approx(pi2 * (k - 1) * (k - 1)).epsilon(1e-4));
      REQUIRE(e.witness.k() == k);
      REQUIRE(e.witness.exhaustive);
    }
  }
  SECTION("Natural k: pi^2 k^2, equipartition") {
    for (int k : {1, 2, 3, 4}) {
      EnergyEstimate e = minimize_energy(g, k, EnergyKind::Natural);
      REQUIRE(e.value == Catch::Approx(pi2 * k * k).epsilon(1e-4));
    }
  }
  SECTION("witness energy recomputes to the reported value") {
    EnergyEstimate e = minimize_energy(g, 3, EnergyKind::Dirichlet);
    REQUIRE(partition_energy(e.witness, EnergyKind::Dirichlet) ==
            Catch::Approx(e.value).epsilon(1e-9));
  }
}

TEST_CASE("star equalities at unit edges") {
  MetricGraph g = catalog::star(3);
  EnergyEstimate n3 = minimize_energy(g, 3, EnergyKind::Natural);
  REQUIRE(n3.value == Catch::Approx(pi2).epsilon(1e-2));
  EnergyEstimate d4 = minimize_energy(g, 4, EnergyKind::Dirichlet);
  REQUIRE(d4.value == Catch::Approx(pi2).epsilon(1e-2));
  EnergyEstimate n2 = minimize_energy(g, 2, EnergyKind::Natural);
  REQUIRE(n2.value == Catch::Approx(pi2).epsilon(1e-2));
  EnergyEstimate d3 = minimize_energy(g, 3, EnergyKind::Dirichlet);
  REQUIRE(d3.value == Catch::Approx(pi2 / 4).epsilon(1e-2));
  REQUIRE(n2.value > d3.value);
}

TEST_CASE("loop energies coincide for k >= 2") {
  MetricGraph g = catalog::loop(1.0);
  for (int k : {2, 3}) {
    EnergyEstimate n = minimize_energy(g, k, EnergyKind::Natural);
    EnergyEstimate d = minimize_energy(g, k, EnergyKind::Dirichlet);
    REQUIRE(n.value == Catch::Approx(pi2 * k * k).epsilon(1e-4));
    REQUIRE(d.value == Catch::Approx(pi2 * k * k).epsilon(1e-4));
  }
  EnergyEstimate n1 = minimize_energy(g, 1, EnergyKind::Natural);
  REQUIRE(n1.value == Catch::Approx(pi2).epsilon(1e-4));  // opened loop
}

TEST_CASE("infeasible k") {
  REQUIRE_THROWS_AS(minimize_energy(catalog::interval(1.0), 6, EnergyKind::Dirichlet, 4),
                    InfeasibleK);
}

TEST_CASE("caps guard the search") {
  REQUIRE_THROWS_AS(
      minimize_energy(catalog::interval(1.0), 2, EnergyKind::Dirichlet, 32),
      SearchSpaceTooLarge);
}

TEST_CASE("exhaustive extension never increases the energy") {
  MetricGraph g = build_graph({{0, 2.0}, {1, 1.0}, {2, 1.0}, {3, 1.0}},
                              {{{0, End::Source}, {0, End::Target}, {1, End::Source},
                                {2, End::Source}, {3, End::Source}},
                               {{1, End::Target}},
                               {{2, End::Target}},
                               {{3, End::Target}}});
  CutRelation rel = maximal_cut(g, {0});
  Partition p = partition_from_cut(g, rel, {{1}, {2}, {3}});
  Partition q = exhaustive_extension(p);
  REQUIRE(partition_energy(q, EnergyKind::Natural) <=
          partition_energy(p, EnergyKind::Natural) + 1e-9);
  REQUIRE(partition_energy(q, EnergyKind::Dirichlet) <=
          partition_energy(p, EnergyKind::Dirichlet) + 1e-9);
}

TEST_CASE("nodal partition from N witnesses") {
  SECTION("3-star k=3: four clusters of energy pi^2") {
    EnergyEstimate e = minimize_energy(catalog::star(3), 3, EnergyKind::Natural);
    Partition p = nodal_partition_from_N_minimizer(e.witness);
    REQUIRE(p.k() >= 2 * 3 - e.witness.rank);
    REQUIRE(p.k() == 4);
    REQUIRE(partition_energy(p, EnergyKind::Dirichlet) <= e.value * (1 + 1e-6));
  }
  SECTION("interval k=2: three clusters") {
    EnergyEstimate e = minimize_energy(catalog::interval(1.0), 2, EnergyKind::Natural);
    Partition p = nodal_partition_from_N_minimizer(e.witness);
    REQUIRE(p.k() == 3);
    REQUIRE(partition_energy(p, EnergyKind::Dirichlet) <= e.value * (1 + 1e-6));
  }
  SECTION("trivial loop witness: two clusters") {
    MetricGraph g = catalog::loop(1.0);
    Partition trivial = partition_all_components(g, identity_relation(g));
    Partition p = nodal_partition_from_N_minimizer(trivial);
    REQUIRE(p.k() == 2);
    REQUIRE(partition_energy(p, EnergyKind::Dirichlet) <=
            mu2(g) * (1 + 1e-6));
  }
}

TEST_CASE("neumann partition from D witnesses") {
  SECTION("interval k=3: two clusters at the same energy") {
    EnergyEstimate e = minimize_energy(catalog::interval(1.0), 3, EnergyKind::Dirichlet);
    Partition p = neumann_partition_from_D_minimizer(e.witness);
    int r = e.witness.rank - (e.witness.k() - 1);
    int n = malign_count(e.witness);
    REQUIRE(p.k() >= e.witness.k() + 1 - n - r);
    REQUIRE(p.k() == 2);
    REQUIRE(partition_energy(p, EnergyKind::Natural) <=
            e.value + ineq_slack(e.value));
  }
  SECTION("3-star k=4") {
    EnergyEstimate e = minimize_energy(catalog::star(3), 4, EnergyKind::Dirichlet);
    Partition p = neumann_partition_from_D_minimizer(e.witness);
    REQUIRE(p.k() >= 2);
    REQUIRE(partition_energy(p, EnergyKind::Natural) <= e.value + ineq_slack(e.value));
  }
  SECTION("loop k=2: both clusters benign, two clusters back") {
    EnergyEstimate e = minimize_energy(catalog::loop(1.0), 2, EnergyKind::Dirichlet);
    REQUIRE(malign_count(e.witness) == 0);
    Partition p = neumann_partition_from_D_minimizer(e.witness);
    int r = e.witness.rank - 1;
    REQUIRE(p.k() >= 2 + 1 - 0 - r);
    REQUIRE(partition_energy(p, EnergyKind::Natural) <= e.value + ineq_slack(e.value));
  }
}

TEST_CASE("cor 1.3 partition reaches lambda_k exactly") {
  for (const char* name : {"star:3", "lasso", "figure8"}) {
    MetricGraph g = catalog::parse(name);
    Spectrum la = eigenvalues(all_dirichlet(g), 4);
    for (int k = 1; k <= 4; ++k) {
      auto [p, energy] = cor13_partition(g, k, la.modes[k - 1].lambda);
      REQUIRE(p.k() == k);
      REQUIRE(energy ==
              Catch::Approx(la.modes[k - 1].lambda).margin(1e-8 * (1 + la.modes[k - 1].lambda)));
    }
  }
}

TEST_CASE("verify_interlacing on the 3-star") {
  BoundReport rep = verify_interlacing(catalog::star(3), 4);
  REQUIRE(rep.eulerian_n == 2);
  REQUIRE(rep.topo.betti == 0);
  REQUIRE(rep.all_rigorous_ok());
  REQUIRE(rep.all_heuristic_ok());
  // Star equality rows: Lhat_N_3 == Lhat_D_4 == pi^2.
  REQUIRE(rep.rows[2].lhat_N == Catch::Approx(pi2).epsilon(1e-2));
  REQUIRE(rep.rows[3].lhat_D == Catch::Approx(pi2).epsilon(1e-2));
}

TEST_CASE("verify_interlacing on the loop shows equality") {
  BoundReport rep = verify_interlacing(catalog::loop(1.0), 3);
  REQUIRE(rep.all_rigorous_ok());
  REQUIRE(rep.all_heuristic_ok());
  for (int k = 2; k <= 3; ++k) {
    const BoundRow& row = rep.rows[k - 1];
    REQUIRE(row.lhat_N == Catch::Approx(row.lhat_D).epsilon(1e-4));
  }
}

TEST_CASE("bound formulas at spec'd points") {
  // 3-star, k=4: Cor 1.5 bound pi^2 (4+1-0-3)^2 / 9 = 4 pi^2 / 9 <= estimate.
  BoundReport rep = verify_interlacing(catalog::star(3), 4);
  const BoundRow& row = rep.rows[3];
  REQUIRE(row.cor15 == Catch::Approx(4 * pi2 / 9).epsilon(1e-12));
  REQUIRE(row.lhat_D >= row.cor15);
  // Interval: Cor 1.5 = pi^2 (k-1)^2 equals the Dirichlet estimate (sharp).
  BoundReport rin = verify_interlacing(catalog::interval(1.0), 3);
  REQUIRE(rin.rows[2].cor15 == Catch::Approx(4 * pi2).epsilon(1e-12));
  REQUIRE(rin.rows[2].lhat_D == Catch::Approx(4 * pi2).epsilon(1e-4));
}

TEST_CASE("rigid restriction never beats the connected estimate") {
  for (const char* name : {"loop:1", "figure8"}) {
    MetricGraph g = catalog::parse(name);
    for (int k : {2, 3}) {
      MinimizeOptions rigid;
      rigid.rigid_only = true;
      EnergyEstimate er = minimize_energy(g, k, EnergyKind::Natural, 8, rigid);
      EnergyEstimate ec = minimize_energy(g, k, EnergyKind::Natural, 8);
      REQUIRE(er.value >= ec.value - 1e-9 * std::max(1.0, ec.value));
      REQUIRE(er.witness.rigid);
    }
  }
}
