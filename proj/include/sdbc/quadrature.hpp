#pragma once

#include <array>
#include <vector>

namespace sdbc {

/// Gauss-Legendre rule on [0,1]; weights sum to 1.
struct EdgeQuadrature {
  std::vector<double> points;
  std::vector<double> weights;
  int npoints() const { return static_cast<int>(points.size()); }
};

EdgeQuadrature edge_quadrature(int npoints);

/// Quadrature on the reference triangle {l1,l2,l3 >= 0, l1+l2+l3 = 1}.
/// Points are barycentric, weights are positive and sum to 1/2 (the
/// reference-triangle area), and the rule integrates polynomials up to
/// `degree` exactly.
struct TriangleQuadrature {
  std::vector<std::array<double, 3>> points;
  std::vector<double> weights;
  int degree = 0;
  int npoints() const { return static_cast<int>(points.size()); }
};

TriangleQuadrature triangle_quadrature(int degree);

}  // namespace sdbc
