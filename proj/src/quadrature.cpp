#include "sdbc/quadrature.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace sdbc {

namespace {

struct GaussRule {
  Eigen::VectorXd nodes;    // on [-1,1]
  Eigen::VectorXd weights;  // sum to mu0
};

// Golub-Welsch: nodes/weights of the n-point Gauss rule for the weight
// function whose monic three-term recurrence has coefficients (a_k, b_k)
// and zeroth moment mu0.
GaussRule golub_welsch(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double mu0) {
  const int n = static_cast<int>(a.size());
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    J(k, k) = a(k);
    if (k + 1 < n) {
      const double off = std::sqrt(b(k + 1));
      J(k, k + 1) = off;
      J(k + 1, k) = off;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  GaussRule rule;
  rule.nodes = es.eigenvalues();
  rule.weights.resize(n);
  for (int k = 0; k < n; ++k) {
    const double v0 = es.eigenvectors()(0, k);
    rule.weights(k) = mu0 * v0 * v0;
  }
  return rule;
}

// Legendre weight 1 on [-1,1].
GaussRule gauss_legendre(int n) {
  Eigen::VectorXd a = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  for (int k = 1; k < n; ++k) b(k) = static_cast<double>(k) * k / (4.0 * k * k - 1.0);
  return golub_welsch(a, b, 2.0);
}

// Jacobi weight (1-x) on [-1,1] (alpha = 1, beta = 0).
GaussRule gauss_jacobi10(int n) {
  Eigen::VectorXd a(n), b(n);
  b(0) = 0.0;
  for (int k = 0; k < n; ++k) {
    const double tk = 2.0 * k + 1.0;  // 2k + alpha + beta
    a(k) = -1.0 / (tk * (tk + 2.0));
    if (k >= 1) b(k) = k * (k + 1.0) / (tk * tk);
  }
  return golub_welsch(a, b, 2.0);
}

}  // namespace

EdgeQuadrature edge_quadrature(int npoints) {
  if (npoints < 1) throw std::invalid_argument("edge_quadrature: npoints must be >= 1");
  const GaussRule gl = gauss_legendre(npoints);
  EdgeQuadrature q;
  q.points.resize(npoints);
  q.weights.resize(npoints);
  for (int k = 0; k < npoints; ++k) {
    q.points[k] = 0.5 * (gl.nodes(k) + 1.0);
    q.weights[k] = 0.5 * gl.weights(k);
  }
  return q;
}

TriangleQuadrature triangle_quadrature(int degree) {
  if (degree < 0) throw std::invalid_argument("triangle_quadrature: degree must be >= 0");
  // Conical product rule: x = xi, y = eta (1 - xi) maps [0,1]^2 onto the
  // reference triangle with Jacobian (1 - xi), absorbed by the Jacobi
  // weight in xi. n points per direction give exactness 2n-1 >= degree+1.
  const int n = degree / 2 + 1;
  const GaussRule gj = gauss_jacobi10(n);
  const GaussRule gl = gauss_legendre(n);

  TriangleQuadrature q;
  q.degree = 2 * n - 1;
  q.points.reserve(n * n);
  q.weights.reserve(n * n);
  for (int i = 0; i < n; ++i) {
    const double xi = 0.5 * (gj.nodes(i) + 1.0);
    const double wxi = 0.25 * gj.weights(i);  // includes the (1-xi) Jacobian
    for (int j = 0; j < n; ++j) {
      const double eta = 0.5 * (gl.nodes(j) + 1.0);
      const double weta = 0.5 * gl.weights(j);
      const double x = xi;
      const double y = eta * (1.0 - xi);
      q.points.push_back({1.0 - x - y, x, y});
      q.weights.push_back(wxi * weta);
    }
  }
  return q;
}

}  // namespace sdbc
