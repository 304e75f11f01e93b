#include <cmath>
#include <random>

#include "doctest.h"
#include "maasslab/errors.hpp"
#include "maasslab/form.hpp"
#include "support.hpp"

using namespace maasslab;

TEST_CASE("hecke_extend multiplicativity and recursion") {
  const double a = 0.37, b = -1.21;
  const HeckeTable six = hecke_extend({{2, a}, {3, b}, {5, 0.4}}, 6);
  CHECK(six(1) == 1.0);
  CHECK(six(6) == doctest::Approx(a * b).epsilon(1e-15));
  const HeckeTable eight = hecke_extend({{2, a}, {3, b}, {5, 0.4}, {7, 0.1}}, 8);
  CHECK(eight(4) == doctest::Approx(a * a - 1).epsilon(1e-15));
  CHECK(eight(8) == doctest::Approx(a * a * a - 2 * a).epsilon(1e-15));
  CHECK_THROWS_AS(eight(9), TableExtentError);
}

TEST_CASE("hecke_extend reports a missing prime") {
  CHECK_THROWS_AS(hecke_extend({{2, 0.5}}, 4), DomainError);
}

TEST_CASE("Hecke relations on random factorizations") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> lam(-2.0, 2.0);
  std::map<int, double> primes;
  for (int p : primes_up_to(400)) primes[p] = lam(rng);
  const HeckeTable T = hecke_extend(primes, 400);
  std::uniform_int_distribution<int> pick(1, 400);
  for (int i = 0; i < 500; ++i) {
    const int m = pick(rng), n = pick(rng);
    if (m * n > 400) continue;
    // lambda(m) lambda(n) = sum over d | gcd(m, n) of lambda(mn / d^2)
    double rhs = 0.0;
    for (int d = 1; d <= std::min(m, n); ++d) {
      if (m % d == 0 && n % d == 0) rhs += T(m * n / (d * d));
    }
    CHECK(T(m) * T(n) == doctest::Approx(rhs).epsilon(1e-10).scale(1.0));
  }
}

TEST_CASE("truncation_length examples") {
  const MaassForm& f = testsupport::first_form().form;
  CHECK(truncation_length(f, 10.0, 1e-12) <= 4);
  const int n = truncation_length(f, 0.9, 1e-12);
  CHECK(n >= 3);
  CHECK(n <= 10);
  CHECK(truncation_length(f, 1e4, 1e-12) == 1);
}

TEST_CASE("truncation guarantee under doubling") {
  const MaassForm& f = testsupport::first_form().form;
  const double tol = 1e-10;
  for (double y : {0.9, 1.3, 2.0}) {
    const int N = truncation_length(f, y, tol);
    const KernelRow a = kernel_row(f, y, N, 1e-14);
    const KernelRow b = kernel_row(f, y, 2 * N, 1e-14);
    // The neglected tail is below tol; the cosine series counts it twice (+-n).
    for (double x : {0.0, 0.17, 0.31, 0.5}) {
      CHECK(std::abs(cosine_series(a, x) - cosine_series(b, x)) < 2 * tol);
    }
  }
}

TEST_CASE("evaluate_phi is insensitive to doubling the truncation") {
  const MaassForm& f = testsupport::first_form().form;
  const double tol = 1e-10;
  for (double y : {0.9, 1.3, 2.0}) {
    const double scale = f.rhoOne * std::sqrt(y);
    const int N = truncation_length(f, y, 0.5 * tol / std::max(1.0, scale));
    const KernelRow b = kernel_row(f, y, 2 * N, 1e-14);
    for (double x : {0.0, 0.17, 0.31, 0.5}) {
      CHECK(std::abs(evaluate_phi(f, {x, y}, tol) - scale * cosine_series(b, x)) < tol);
    }
  }
}

TEST_CASE("phi is even and periodic") {
  const MaassForm& f = testsupport::first_form().form;
  const double tol = 1e-10;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ux(-0.5, 0.5), uy(0.87, 3.0);
  for (int i = 0; i < 100; ++i) {
    const Point z{ux(rng), uy(rng)};
    const double v = evaluate_phi(f, z, tol);
    CHECK(std::abs(evaluate_phi(f, {-z.x, z.y}, tol) - v) <= 2 * tol);
    CHECK(std::abs(evaluate_phi(f, {z.x + 1, z.y}, tol) - v) <= 2 * tol);
  }
}

TEST_CASE("Phi and phi are consistent") {
  const MaassForm& f = testsupport::first_form().form;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ux(-0.5, 0.5), uy(0.87, 3.0);
  for (int i = 0; i < 50; ++i) {
    const Point z{ux(rng), uy(rng)};
    const double lhs = evaluate_Phi(f, z) * f.rhoOne * std::sqrt(z.y);
    CHECK(std::abs(lhs - evaluate_phi(f, z)) <= 1e-10);
  }
  CHECK(std::abs(evaluate_Phi(f, {0.2, 50.0}, 1e-12)) <= 1e-12);
}

TEST_CASE("modular invariance of a solved form") {
  const MaassForm& f = testsupport::first_form().form;
  const Point z{0.3, 0.8};
  const double n = z.x * z.x + z.y * z.y;
  const Point w{-z.x / n, z.y / n};
  CHECK(std::abs(evaluate_phi(f, w) - evaluate_phi(f, z)) <= 1e-5);
  CHECK(automorphy_residual(f, 20) <= 1e-4);
}

TEST_CASE("coefficient_mass") {
  const MaassForm& f = testsupport::first_form().form;
  const CoefficientMass m = coefficient_mass(f, 1.0);
  CHECK_FALSE(m.vacuous);
  CHECK(m.value >= f.t / 1000);
  const CoefficientMass none = coefficient_mass(f, 0.05);
  CHECK(none.vacuous);
  CHECK(none.value == 0.0);
  double prev = 0.0;
  for (double w = 0.1; w <= 4.0; w += 0.1) {
    const double v = coefficient_mass(f, w).value;
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("make_form validation") {
  const std::map<int, double> primes{{2, 0.1}, {3, 0.2}};
  CHECK_THROWS_AS(make_form(13.0, primes, 1.0, "odd", 3), DomainError);
  CHECK_THROWS_AS(make_form(-1.0, primes, 1.0, "even", 3), DomainError);
  CHECK_THROWS_AS(make_form(13.0, primes, 0.0, "even", 3), DomainError);
  CHECK(make_form(13.0, {{2, 10.0}, {3, 0.0}}, 1.0, "even", 3).softBoundFlag());
  CHECK_FALSE(make_form(13.0, primes, 1.0, "even", 3).softBoundFlag());
}

TEST_CASE("pullback lands in the fundamental domain") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> ux(-3.0, 3.0), uy(0.01, 2.0);
  for (int i = 0; i < 200; ++i) {
    const Point p = pullback({ux(rng), uy(rng)});
    CHECK(std::abs(p.x) <= 0.5 + 1e-12);
    CHECK(p.x * p.x + p.y * p.y >= 1.0 - 1e-12);
  }
}
