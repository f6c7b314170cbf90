#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sdbc/quadrature.hpp"

#include <cmath>

using namespace sdbc;

namespace {

// integral of x^p y^q over the reference triangle: p! q! / (p+q+2)!
double exact_monomial(int p, int q) {
  double v = 1.0;
  for (int k = 1; k <= p; ++k) v *= k;
  for (int k = 1; k <= q; ++k) v *= k;
  for (int k = 1; k <= p + q + 2; ++k) v /= k;
  return v;
}

}  // namespace

TEST_CASE("triangle rules integrate monomials up to their degree") {
  for (int degree : {2, 4, 6, 8}) {
    const TriangleQuadrature quad = triangle_quadrature(degree);
    CHECK(quad.degree >= degree);

    double wsum = 0.0;
    for (double w : quad.weights) {
      CHECK(w > 0.0);
      wsum += w;
    }
    CHECK(wsum == doctest::Approx(0.5).epsilon(1e-14));

    for (int p = 0; p <= quad.degree; ++p) {
      for (int q = 0; p + q <= quad.degree; ++q) {
        double approx = 0.0;
        for (int k = 0; k < quad.npoints(); ++k) {
          const auto& l = quad.points[k];
          approx += quad.weights[k] * std::pow(l[1], p) * std::pow(l[2], q);
        }
        CHECK(std::abs(approx - exact_monomial(p, q)) < 1e-14);
      }
    }
  }
}

TEST_CASE("triangle points are inside the reference element") {
  const TriangleQuadrature quad = triangle_quadrature(8);
  for (const auto& l : quad.points) {
    CHECK(l[0] > 0.0);
    CHECK(l[1] > 0.0);
    CHECK(l[2] > 0.0);
    CHECK(l[0] + l[1] + l[2] == doctest::Approx(1.0).epsilon(1e-15));
  }
}

TEST_CASE("edge rules are exact Gauss-Legendre on [0,1]") {
  for (int n : {1, 2, 3, 4, 5}) {
    const EdgeQuadrature eq = edge_quadrature(n);
    REQUIRE(eq.npoints() == n);
    for (int p = 0; p <= 2 * n - 1; ++p) {
      double approx = 0.0;
      for (int k = 0; k < n; ++k) approx += eq.weights[k] * std::pow(eq.points[k], p);
      CHECK(std::abs(approx - 1.0 / (p + 1)) < 1e-14);
    }
  }
}
