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
#include "mgsp/fem.hpp"
#include "mgsp/spectral.hpp"

using namespace mgsp;

namespace {
const double pi = M_PI;
}

TEST_CASE("secular sigma vanishes exactly at interval Dirichlet eigenvalues") {
  SpectralProblem p = all_dirichlet(catalog::interval(1.0));
  REQUIRE(secular_sigma(p, pi) < 1e-12);
  REQUIRE(secular_sigma(p, pi / 2) > 1e-3);
}

TEST_CASE("loop eigenvalues are double") {
  SpectralProblem p = all_standard(catalog::loop(1.0));
  Spectrum s = eigenvalues(p, 5);
  std::vector<double> expect{0, 4 * pi * pi, 4 * pi * pi, 16 * pi * pi, 16 * pi * pi};
  for (int i = 0; i < 5; ++i)
    REQUIRE(s.modes[i].lambda == Catch::Approx(expect[i]).margin(1e-8));
  REQUIRE(s.modes[1].multiplicity == 2);
}

TEST_CASE("3-star with Dirichlet leaves has its ground state at k = pi/2") {
  MetricGraph g = catalog::star(3);
  std::vector<int> leaves;
  for (int v = 0; v < g.vertex_count(); ++v)
    if (g.degree(v) == 1) leaves.push_back(v);
  SpectralProblem p = with_dirichlet_at(g, leaves);
  REQUIRE(secular_sigma(p, pi / 2) < 1e-10);
  Spectrum s = eigenvalues(p, 1);
  REQUIRE(s.modes[0].lambda == Catch::Approx(pi * pi / 4).margin(1e-9));
}

TEST_CASE("interval spectra match the closed forms") {
  MetricGraph g = catalog::interval(1.0);
  SECTION("standard: mu_k = pi^2 (k-1)^2") {
    Spectrum s = eigenvalues(all_standard(g), 6);
    for (int k = 1; k <= 6; ++k)
      REQUIRE(s.modes[k - 1].lambda ==
              Catch::Approx(pi * pi * (k - 1) * (k - 1)).margin(1e-8));
  }
  SECTION("Dirichlet: lambda_k = pi^2 k^2") {
    Spectrum s = eigenvalues(all_dirichlet(g), 6);
    for (int k = 1; k <= 6; ++k)
      REQUIRE(s.modes[k - 1].lambda == Catch::Approx(pi * pi * k * k).margin(1e-8));
  }
}

TEST_CASE("mu2 and lambda1 closed forms") {
  REQUIRE(mu2(catalog::loop(2.0)) == Catch::Approx(4 * pi * pi / 4).margin(1e-9));
  MetricGraph i3 = catalog::interval(3.0);
  REQUIRE(lambda1(i3, {i3.vertex_of({0, End::Source})}) ==
          Catch::Approx(pi * pi / (4 * 9)).margin(1e-10));
  REQUIRE(lambda1(i3, {0, 1}) == Catch::Approx(pi * pi / 9).margin(1e-10));
  REQUIRE_THROWS_AS(lambda1(i3, {}), EmptyDirichletSet);
}

TEST_CASE("rayleigh quotient") {
  MetricGraph g = catalog::interval(1.0);
  SECTION("sin(pi x) gives pi^2") {
    PiecewiseTrig f;
    f.parts[0] = TrigPiece{pi, 0.0, pi};  // sin(pi x) = pi * sin(pi x)/pi
    REQUIRE(rayleigh(g, f) == Catch::Approx(pi * pi).epsilon(1e-12));
  }
  SECTION("constant on a loop gives 0") {
    MetricGraph l = catalog::loop(1.0);
    PiecewiseTrig f;
    f.parts[0] = TrigPiece{0, 1.0, 0.0};
    REQUIRE(rayleigh(l, f) == Catch::Approx(0.0).margin(1e-15));
  }
  SECTION("eigenfunction reproduces its eigenvalue") {
    SpectralProblem p = all_standard(catalog::star(3));
    Spectrum s = eigenvalues(p, 4);
    for (const Mode& m : s.modes) {
      if (m.lambda == 0) continue;
      PiecewiseTrig f = mode_to_piecewise(p.graph, m);
      REQUIRE(rayleigh(p.graph, f) == Catch::Approx(m.lambda).epsilon(1e-10));
    }
  }
  SECTION("zero function is rejected") {
    PiecewiseTrig f;
    REQUIRE_THROWS_AS(rayleigh(g, f), ZeroFunction);
  }
}

TEST_CASE("FEM oracle on known spectra") {
  SECTION("interval Dirichlet, h = 1/64") {
    SpectralProblem p = all_dirichlet(catalog::interval(1.0));
    auto lam = fem_eigenvalues(p, 1, 64);
    REQUIRE(std::abs(lam[0] - pi * pi) / (pi * pi) < 1e-3);
  }
  SECTION("loop standard: doubled mu_2") {
    SpectralProblem p = all_standard(catalog::loop(1.0));
    auto lam = fem_eigenvalues(p, 3, 64);
    REQUIRE(lam[0] == Catch::Approx(0.0).margin(1e-8));
    REQUIRE(std::abs(lam[1] - 4 * pi * pi) / (4 * pi * pi) < 2e-3);
    REQUIRE(std::abs(lam[2] - 4 * pi * pi) / (4 * pi * pi) < 2e-3);
  }
  SECTION("extrapolation tightens the star spectrum") {
    SpectralProblem p = all_standard(catalog::star(3));
    Spectrum exact = eigenvalues(p, 6);
    auto fem = fem_eigenvalues_extrapolated(p, 6, 32);
    for (int i = 1; i < 6; ++i)
      REQUIRE(std::abs(fem[i] - exact.modes[i].lambda) / exact.modes[i].lambda < 1e-3);
  }
}

TEST_CASE("eigenvector residuals stay under 1e-8") {
  for (const char* name : {"star:3", "lasso", "figure8", "dumbbell"}) {
    SpectralProblem p = all_standard(catalog::parse(name));
    Spectrum s = eigenvalues(p, 6);
    for (const Mode& m : s.modes) REQUIRE(vertex_residual(p, m) < 1e-8);
  }
}

TEST_CASE("eigenvalue count matches the mode list") {
  SpectralProblem p = all_standard(catalog::figure8());
  Spectrum s = eigenvalues(p, 8);
  double cutoff = (s.modes[7].lambda + s.modes[7].lambda * 1e-6);
  int below = 0;
  for (const Mode& m : s.modes)
    if (m.lambda <= cutoff) ++below;
  // count_eigenvalues counts everything <= cutoff, also beyond the first 8.
  REQUIRE(count_eigenvalues(p, cutoff) >= below);
}

TEST_CASE("interlacing under one Dirichlet vertex") {
  for (const char* name : {"star:3", "loop:1", "lasso"}) {
    MetricGraph g = catalog::parse(name);
    SpectralProblem std_prob = all_standard(g);
    SpectralProblem dir_prob = with_dirichlet_at(g, {0});
    int n = 6;
    Spectrum mu = eigenvalues(std_prob, n + 1);
    Spectrum la = eigenvalues(dir_prob, n + 1);
    for (int k = 1; k + 1 <= n; ++k) {
      double lam_k1 = la.modes[k].lambda;     // lambda_{k+|VD|}, |VD| = 1
      double mu_k1 = mu.modes[k].lambda;      // mu_{k+1}
      double lam_k = la.modes[k - 1].lambda;  // lambda_k
      REQUIRE(lam_k1 >= mu_k1 - 1e-8 * std::max(1.0, mu_k1));
      REQUIRE(mu_k1 >= lam_k - 1e-8 * std::max(1.0, lam_k));
    }
  }
}

TEST_CASE("smoothing standard dummies preserves the spectrum") {
  MetricGraph g = catalog::star(3);
  auto sub = subdivide_ex(g, 0, 0.5);
  SpectralProblem coarse = all_standard(g);
  SpectralProblem fine = all_standard(sub.graph);
  SpectralProblem smoothed = smooth_standard_dummies(fine);
  REQUIRE(smoothed.graph.edge_count() == 3);
  Spectrum a = eigenvalues(coarse, 5);
  Spectrum b = eigenvalues(fine, 5);
  for (int i = 0; i < 5; ++i)
    REQUIRE(a.modes[i].lambda == Catch::Approx(b.modes[i].lambda).margin(1e-8));
}
