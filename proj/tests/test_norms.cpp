#include <cmath>

#include "doctest.h"
#include "maasslab/errors.hpp"
#include "maasslab/norms.hpp"
#include "support.hpp"

using namespace maasslab;

TEST_CASE("fundamental domain area") {
  DomainQuadrature opts;
  opts.infiniteTail = true;
  const DomainIntegral area = integrate_fundamental_domain(
      [](double) { return Slice{[](double) { return 1.0; }, 0}; }, opts);
  CHECK(area.value == doctest::Approx(M_PI / 3).epsilon(1e-9));
}

TEST_CASE("horocycle Parseval identity") {
  const MaassForm& f = testsupport::first_form().form;
  for (double y : {0.9, 1.0, 2.0}) {
    const HorocycleDirect d = horocycle_l2_direct(f, y, 512);
    CHECK_FALSE(d.underResolved);
    CHECK(std::abs(d.value - d.parseval) <= 1e-8 * std::max(1.0, d.parseval));
  }
  CHECK(horocycle_l2_direct(f, 40.0, 64).value <= 1e-10);
}

TEST_CASE("horocycle main term") {
  const MaassForm& f = testsupport::first_form().form;
  const HorocycleParseval p = horocycle_l2_mainterm(f, 1.0);
  CHECK(p.Delta == doctest::Approx(std::cbrt(f.t) * std::log(f.t)).epsilon(1e-15));
  const HorocycleDirect d = horocycle_l2_direct(f, 1.0, 512);
  CHECK(std::abs(d.value - p.mainTerm) <= p.errorBudget);
  const HorocycleParseval empty = horocycle_l2_mainterm(f, f.t / (2 * M_PI) - 1e-3);
  CHECK(empty.mainTerm == 0.0);
}

TEST_CASE("Lp norms") {
  const MaassForm& f = testsupport::first_form().form;
  CHECK(lp_norm(f, 2.0) == doctest::Approx(1.0).epsilon(5e-2));
  const NormResult l4 = l4_norm(f);
  CHECK(std::pow(l4.value, 0.25) == doctest::Approx(lp_norm(f, 4.0)).epsilon(1e-10));
  CHECK(l4.value >= 9 / M_PI / 3);
  CHECK(l4.value <= 9 / M_PI * 3);
  CHECK_THROWS_AS(lp_norm(f, 1.5), DomainError);
}

TEST_CASE("log-convexity of the Lp integrals") {
  const MaassForm& f = testsupport::first_form().form;
  // p -> log int |phi|^p is convex.
  const double a = std::log(lp_integral(f, 2.0).value);
  const double b = std::log(lp_integral(f, 3.0).value);
  const double c = std::log(lp_integral(f, 4.0).value);
  CHECK(2 * b <= a + c + 1e-9);
}

TEST_CASE("geodesic restriction") {
  const MaassForm& f = testsupport::first_form().form;
  const double whole = geodesic_l2(f, 1.0, 3.0);
  CHECK(whole >= 0.05);
  CHECK(whole <= 20.0);
  CHECK(whole == doctest::Approx(geodesic_l2(f, 1.0, 1.7) + geodesic_l2(f, 1.7, 3.0)).epsilon(1e-8));
  CHECK(geodesic_l2(f, 5.0, 6.0) <= 1e-10);
}

TEST_CASE("range pieces sum to psi") {
  const MaassForm& f = testsupport::first_form().form;
  for (double eps : {0.1, 0.25}) {
    const std::vector<RangePiece> w = range_windows(f.t, eps);
    CHECK(w.front().label == "psi0");
    CHECK(w.back().label == "psi3");
    for (Point z : {Point{0.1, 0.9}, Point{-0.3, 1.0}, Point{0.45, 1.4}, Point{0.0, 2.0}}) {
      double re = 0.0, im = 0.0;
      for (const RangePiece& p : w) {
        const auto [a, b] = piece_value(f, eps, p.label, p.l, z);
        re += a;
        im += b;
      }
      const auto [a, b] = piece_value(f, eps, "psi", 0, z);
      CHECK(re == doctest::Approx(a).epsilon(1e-12).scale(1.0));
      CHECK(im == doctest::Approx(b).epsilon(1e-12).scale(1.0));
    }
  }
}

TEST_CASE("range decomposition") {
  const MaassForm& f = testsupport::first_form().form;
  const std::vector<RangePiece> pieces = range_decomposition(f, 0.25);
  for (const RangePiece& p : pieces) CHECK(p.contributionL4 >= 0.0);
}
