#include <cmath>

#include "doctest.h"
#include "maasslab/eigensolver.hpp"
#include "maasslab/errors.hpp"
#include "support.hpp"

using namespace maasslab;

TEST_CASE("first even eigenvalue") {
  const SolvedForm& s = testsupport::first_form();
  CHECK(s.form.t == doctest::Approx(13.779751).epsilon(1e-7));
  CHECK(s.diagnostics.automorphyResidual <= 1e-4);
  const HeckeTable& h = s.form.hecke;
  CHECK(std::abs(h(2) * h(3) - h(6)) <= 1e-8);
  CHECK(std::abs(h(2) * h(2) - 1 - h(4)) <= 1e-8);
}

TEST_CASE("raw coefficients are nearly multiplicative") {
  const SolveDiagnostics& d = testsupport::first_form().diagnostics;
  CHECK(d.heckeResidual6 <= 1e-6);
  CHECK(d.heckeResidual4 <= 1e-6);
}

TEST_CASE("eigenvalue is stable under collocation parameters") {
  const double t1 = testsupport::first_form().form.t;
  SolverConfig cfg;
  cfg.tMin = 13.7;
  cfg.tMax = 13.9;
  cfg.m0 = static_cast<int>(std::ceil(2 * cfg.tMax)) + 8;
  cfg.y0 = 0.75;
  const SolvedForm other = solve_even_form_detail(cfg);
  CHECK(std::abs(other.form.t - t1) <= 1e-6);
  for (int p : {2, 3, 5, 7, 11, 13, 17, 19}) {
    CHECK(std::abs(other.form.hecke(p) - testsupport::first_form().form.hecke(p)) <= 1e-5);
  }
}

TEST_CASE("no even eigenvalue in [10, 10.5]") {
  SolverConfig cfg;
  cfg.tMin = 10.0;
  cfg.tMax = 10.5;
  CHECK_THROWS_AS(solve_even_form(cfg), SolverError);
}

TEST_CASE("config validation") {
  SolverConfig cfg;
  cfg.y0 = 1.2;
  CHECK_THROWS_AS(validate(cfg), DomainError);
  cfg = {};
  cfg.tMin = 14.0;
  cfg.tMax = 13.0;
  CHECK_THROWS_AS(validate(cfg), DomainError);
  cfg = {};
  cfg.m0 = 5;
  CHECK_THROWS_AS(validate(cfg), DomainError);
}

TEST_CASE("residual changes sign across the eigenvalue") {
  SolverConfig cfg;
  cfg.tMin = 13.7;
  cfg.tMax = 13.9;
  const double t1 = testsupport::first_form().form.t;
  CHECK(collocation_residual(t1 - 1e-3, cfg) * collocation_residual(t1 + 1e-3, cfg) < 0.0);
}

TEST_CASE("normalization gives unit L2 norm scale") {
  const MaassForm& f = testsupport::first_form().form;
  CHECK(f.rhoOne > 0.0);
  CHECK_FALSE(f.rhoWindowFlag());
}
