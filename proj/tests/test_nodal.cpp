#include <cmath>

#include "doctest.h"
#include "maasslab/errors.hpp"
#include "maasslab/nodal.hpp"
#include "support.hpp"

using namespace maasslab;

TEST_CASE("constant field has one component") {
  const SignGrid g = sample_grid([](double, double) { return 1.0; }, Rect{0, 1, 1, 2}, 40, 40);
  CHECK(count_components(g) == 1);
}

TEST_CASE("checkerboard sin(m pi x) sin(n pi y)") {
  for (auto [m, n] : {std::pair{1, 1}, {2, 3}, {4, 4}, {5, 2}}) {
    const auto f = [m = m, n = n](double x, double y) {
      return std::sin(2 * m * M_PI * x) * std::sin(2 * n * M_PI * y);
    };
    // Cell centres never hit the nodal lines for these grid sizes.
    const SignGrid g = sample_grid(f, Rect{0, 1, 1, 2}, 120, 120);
    CHECK(count_components(g) == 4 * m * n);
  }
}

TEST_CASE("zero cells split components") {
  const auto f = [](double x, double) { return std::abs(x - 0.5) < 0.05 ? 0.0 : 1.0; };
  CHECK(count_components(sample_grid(f, Rect{0, 1, 1, 2}, 50, 10)) == 2);
}

TEST_CASE("rectangle validation") {
  CHECK_THROWS_AS(validate(Rect{0, 0, 1, 2}), DomainError);
  CHECK_THROWS_AS(validate(Rect{0, 1, -1, 2}), DomainError);
  CHECK_THROWS_AS(parse_locus("delta4"), DomainError);
  CHECK(to_string(parse_locus("delta2")) == "delta2");
}

TEST_CASE("coarse grids are rejected") {
  const MaassForm& f = testsupport::first_form().form;
  CHECK_THROWS_AS(sample_grid(f, Rect{-0.5, 0.5, 1, 2}, 10, 10), DomainError);
}

TEST_CASE("component count is stable under refinement") {
  const MaassForm& f = testsupport::first_form().form;
  const Rect r{-0.5, 0.5, 1.0, 2.5};
  const int a = nodal_report(f, r, 10).componentCount;
  const int b = nodal_report(f, r, 20).componentCount;
  const int c = nodal_report(f, r, 40).componentCount;
  CHECK(a == b);
  CHECK(b == c);
}

TEST_CASE("nodal report") {
  const MaassForm& f = testsupport::first_form().form;
  const NodalReport r = nodal_report(f, Rect{-0.5, 0.5, 1.0, 2.5});
  CHECK(r.componentCount >= 1);
  CHECK(r.courantBudget == doctest::Approx(f.eigenvalue() / 24));
  CHECK(r.courantOk);
  CHECK(r.inertLocus == "delta1");
  CHECK(r.inertLowerBound >= 1);
  CHECK(r.bsTarget == doctest::Approx(2 / M_PI * (3 * std::sqrt(3.0) - 5)).epsilon(1e-15));
}

TEST_CASE("inert lower bounds") {
  const MaassForm& f = testsupport::first_form().form;
  for (Locus l : {Locus::delta1, Locus::delta2}) {
    const SegmentFunction s = locus_segment(f, l, 1.0, 2.5);
    CHECK(inert_lower_bound(s) == 1 + (count_sign_changes(s) + 1) / 2);
  }
  CHECK(inert_lower_bound(f, Locus::delta3, M_PI / 2 + 1e-3, 2 * M_PI / 3) >= 1);
  // Above t / pi the form has no sign changes on vertical lines.
  CHECK(inert_lower_bound(f, Locus::delta2, 5.0, 6.0) == 1);
  CHECK_THROWS_AS(locus_segment(f, Locus::delta3, 0.5, 1.0), DomainError);
}
