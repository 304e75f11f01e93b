#include <cmath>
#include <vector>

#include "doctest.h"
#include "maasslab/errors.hpp"
#include "maasslab/quadrature.hpp"

using namespace maasslab;

TEST_CASE("compensated sum recovers cancelled terms") {
  std::vector<double> v = {1e16, 1.0, -1e16, 1.0};
  CHECK(compensated_sum(v) == 2.0);
}

TEST_CASE("gauss-legendre integrates polynomials exactly") {
  const GaussRule& g = gauss_legendre(8);
  double s = 0.0;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) s += g.weights[i] * std::pow(g.nodes[i], 14);
  CHECK(s == doctest::Approx(2.0 / 15.0).epsilon(1e-14));
}

TEST_CASE("adaptive quadrature of a peaked integrand") {
  // int_0^1 1/(1e-4 + x^2) dx = 100 atan(100)
  const QuadResult r = integrate_adaptive([](double x) { return 1.0 / (1e-4 + x * x); }, 0.0, 1.0);
  CHECK(r.value == doctest::Approx(100.0 * std::atan(100.0)).epsilon(1e-11));
}

TEST_CASE("adaptive quadrature honours breakpoints at kinks") {
  const double brk[] = {0.3};
  const QuadResult r =
      integrate_adaptive([](double x) { return std::abs(x - 0.3); }, 0.0, 1.0, {}, brk);
  CHECK(r.value == doctest::Approx(0.5 * (0.09 + 0.49)).epsilon(1e-13));
}

TEST_CASE("adaptive quadrature reports a stall") {
  AdaptiveOptions opts;
  opts.maxPanels = 4;
  CHECK_THROWS_AS(
      integrate_adaptive([](double x) { return std::sin(1000.0 * x); }, 0.0, 10.0, opts),
      AccuracyError);
  const QuadResult r = integrate_adaptive_nothrow(
      [](double x) { return std::sin(1000.0 * x); }, 0.0, 10.0, opts);
  CHECK(r.panels <= 4);
}

TEST_CASE("periodic trapezoid is exact for trigonometric polynomials") {
  const double v = integrate_periodic(
      [](double x) { return std::pow(std::cos(2 * M_PI * 3 * x), 2); }, -0.5, 1.0, 16);
  CHECK(v == doctest::Approx(0.5).epsilon(1e-15));
}
