#include "tfe/quadrature.hpp"

#include <cmath>
#include <stdexcept>

#include "doctest.h"

using namespace tfe;

namespace {

// Exact integral of x^p y^q z^r over the reference simplex:
// p! q! r! / (p+q+r+dim)!.
double monomial_integral(int dim, int p, int q, int r) {
  auto fact = [](int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
  };
  return fact(p) * fact(q) * fact(r) / fact(p + q + r + dim);
}

double integrate_monomial(const QuadRule& rule, int p, int q, int r) {
  double sum = 0.0;
  for (int i = 0; i < rule.size(); ++i) {
    double v = std::pow(rule.points(i, 0), p);
    if (rule.dim >= 2) v *= std::pow(rule.points(i, 1), q);
    if (rule.dim >= 3) v *= std::pow(rule.points(i, 2), r);
    sum += rule.weights[i] * v;
  }
  return sum;
}

}  // namespace

TEST_CASE("centroid rule on the triangle") {
  QuadRule r = simplex_rule(2, 1);
  REQUIRE(r.size() == 1);
  CHECK(r.weights[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(r.points(0, 0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(r.points(0, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("degree-2 rules integrate the quadratic catalog values") {
  // Integral of x*y over the reference triangle is 1/24.
  QuadRule r2 = simplex_rule(2, 2);
  CHECK(integrate_monomial(r2, 1, 1, 0) ==
        doctest::Approx(1.0 / 24.0).epsilon(1e-14));
  // Integral of x^2 over the reference tetrahedron is 1/60.
  QuadRule r3 = simplex_rule(3, 2);
  CHECK(integrate_monomial(r3, 2, 0, 0) ==
        doctest::Approx(1.0 / 60.0).epsilon(1e-14));
}

TEST_CASE("gauss-legendre on [0,1]") {
  for (int n = 1; n <= 8; ++n) {
    QuadRule r = gauss_legendre_01(n);
    for (int p = 0; p <= 2 * n - 1; ++p) {
      double sum = 0.0;
      for (int i = 0; i < n; ++i) sum += r.weights[i] * std::pow(r.points(i, 0), p);
      CHECK(sum == doctest::Approx(1.0 / (p + 1)).epsilon(1e-13));
    }
  }
}

TEST_CASE("gauss-jacobi weighted integrals on [0,1]") {
  // integral of x^p (1-x)^alpha dx = p! alpha! / (p+alpha+1)!
  for (int alpha = 1; alpha <= 2; ++alpha)
    for (int n = 1; n <= 6; ++n) {
      QuadRule r = gauss_jacobi_01(n, alpha);
      for (int p = 0; p <= 2 * n - 1; ++p) {
        double sum = 0.0;
        for (int i = 0; i < n; ++i)
          sum += r.weights[i] * std::pow(r.points(i, 0), p);
        double exact = monomial_integral(1, p, 0, 0);  // p!/(p+1)! base
        // Recompute directly: p! alpha! / (p+alpha+1)!
        double num = 1.0, den = 1.0;
        for (int i = 2; i <= p; ++i) num *= i;
        for (int i = 2; i <= alpha; ++i) num *= i;
        for (int i = 2; i <= p + alpha + 1; ++i) den *= i;
        exact = num / den;
        CHECK(sum == doctest::Approx(exact).epsilon(1e-13));
      }
    }
}

TEST_CASE("exactness across the catalog") {
  for (int dim = 1; dim <= 3; ++dim)
    for (int degree = 0; degree <= 11; ++degree) {
      QuadRule r = simplex_rule(dim, degree);
      CHECK(r.degree >= degree);
      // Weights sum to the simplex measure and points stay inside.
      const double measure = dim == 1 ? 1.0 : (dim == 2 ? 0.5 : 1.0 / 6.0);
      CHECK(r.weights.sum() == doctest::Approx(measure).epsilon(1e-14));
      for (int i = 0; i < r.size(); ++i) {
        double bary = 1.0;
        for (int d = 0; d < dim; ++d) {
          CHECK(r.points(i, d) >= 0.0);
          bary -= r.points(i, d);
        }
        CHECK(bary >= -1e-14);
      }
      for (int p = 0; p <= degree; ++p)
        for (int q = 0; q <= (dim >= 2 ? degree - p : 0); ++q)
          for (int s = 0; s <= (dim >= 3 ? degree - p - q : 0); ++s) {
            const double exact = monomial_integral(dim, p, q, s);
            const double got = integrate_monomial(r, p, q, s);
            CHECK(std::abs(got - exact) <= 1e-14 * std::max(1.0, std::abs(exact)) + 1e-16);
          }
    }
}

TEST_CASE("catalog bounds are enforced") {
  CHECK(max_quadrature_degree() >= 6);
  CHECK_THROWS_AS(simplex_rule(2, max_quadrature_degree() + 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(simplex_rule(2, -1), std::invalid_argument);
  CHECK_THROWS_AS(simplex_rule(4, 2), std::invalid_argument);
  CHECK_THROWS_AS(gauss_legendre_01(0), std::invalid_argument);
}
