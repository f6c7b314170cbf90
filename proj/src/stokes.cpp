#include "sdbc/stokes.hpp"

#include "sdbc/quadrature.hpp"

#include <vector>

namespace sdbc {

namespace {

using Triplet = Eigen::Triplet<double>;

double rel_residual(const Eigen::VectorXd& r, const Eigen::VectorXd& rhs) {
  const double scale = rhs.norm();
  return scale > 0.0 ? r.norm() / scale : r.norm();
}

Eigen::VectorXd solve_bordered_trace(const AssembledSystem& sys, const Eigen::VectorXd& rhs) {
  const int NG = sys.NGamma();
  std::vector<Triplet> trip;
  trip.reserve(sys.SGammaGamma.nonZeros() + 2 * NG);
  for (int col = 0; col < NG; ++col)
    for (SpMat::InnerIterator it(sys.SGammaGamma, col); it; ++it)
      trip.emplace_back(it.row(), col, it.value());
  for (int i = 0; i < NG; ++i) {
    trip.emplace_back(i, NG, sys.c[i]);
    trip.emplace_back(NG, i, sys.c[i]);
  }
  SpMat A(NG + 1, NG + 1);
  A.setFromTriplets(trip.begin(), trip.end());

  Eigen::SparseLU<SpMat> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success)
    throw SingularSystemError("boundary projection system is singular");
  Eigen::VectorXd b(NG + 1);
  b.head(NG) = rhs;
  b[NG] = 0.0;
  const Eigen::VectorXd x = lu.solve(b);
  return x.head(NG);
}

}  // namespace

SaddleSolver::SaddleSolver(const AssembledSystem& sys) : sys_(&sys) {
  const int n0 = sys.N0();
  const int m = sys.Mp() - 1;
  std::vector<Triplet> trip;
  trip.reserve(sys.K00.nonZeros() + 2 * sys.Btilde0.nonZeros());
  for (int col = 0; col < n0; ++col)
    for (SpMat::InnerIterator it(sys.K00, col); it; ++it)
      trip.emplace_back(it.row(), col, it.value());
  for (int col = 0; col < n0; ++col)
    for (SpMat::InnerIterator it(sys.Btilde0, col); it; ++it) {
      trip.emplace_back(n0 + it.row(), col, it.value());
      trip.emplace_back(col, n0 + it.row(), it.value());
    }
  SpMat A(n0 + m, n0 + m);
  A.setFromTriplets(trip.begin(), trip.end());

  lu_.compute(A);
  if (lu_.info() != Eigen::Success)
    throw SingularSystemError("saddle matrix factorization failed");
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> SaddleSolver::solve(const Eigen::VectorXd& rv,
                                                                const Eigen::VectorXd& rp) const {
  const int n0 = sys_->N0();
  const int m = sys_->Mp() - 1;
  Eigen::VectorXd b(n0 + m);
  b.head(n0) = rv;
  b.tail(m) = rp;
  const Eigen::VectorXd x = lu_.solve(b);
  return {x.head(n0), x.tail(m)};
}

StokesSolution solve_dirichlet(const SaddleSolver& solver, const Eigen::VectorXd& trace,
                               const Eigen::VectorXd* interior_load) {
  const AssembledSystem& sys = solver.system();
  Eigen::VectorXd rv = -(sys.KGamma0.transpose() * trace);
  if (interior_load) rv += *interior_load;
  const Eigen::VectorXd rp = -(sys.BtildeGamma * trace);
  auto [v, p] = solver.solve(rv, rp);

  StokesSolution sol;
  sol.velocity = solver.space().scatter(v, trace);
  sol.pressure = std::move(p);
  sol.residual_momentum =
      rel_residual(sys.K00 * v + sys.Btilde0.transpose() * sol.pressure - rv, rv);
  sol.residual_divergence = rel_residual(sys.Btilde0 * v - rp, rp);
  return sol;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> solve_adjoint(const SaddleSolver& solver,
                                                          const Eigen::VectorXd& g) {
  const AssembledSystem& sys = solver.system();
  const Eigen::VectorXd rv = sys.M0 * g;
  const Eigen::VectorXd rp = Eigen::VectorXd::Zero(sys.Mp() - 1);
  return solver.solve(rv, rp);
}

Eigen::VectorXd project_boundary(const AssembledSystem& sys, const VelocityField& u) {
  const FeSpace& sp = *sys.space;
  const Mesh& mesh = *sp.mesh;
  const int deg = sp.family.velocity_degree;
  const int nb = sp.n_boundary_scalar;
  const double ell = sp.boundary_edge_length();
  const EdgeQuadrature eq = edge_quadrature(sp.family.edge_quadrature_points());

  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(sys.NGamma());
  std::vector<double> L(deg + 1);
  for (std::size_t e = 0; e < mesh.boundary_edges.size(); ++e) {
    const Eigen::Vector2d a = mesh.vertices[mesh.boundary_edges[e].a];
    const Eigen::Vector2d b = mesh.vertices[mesh.boundary_edges[e].b];
    for (int q = 0; q < eq.npoints(); ++q) {
      const double t = eq.points[q];
      eval_line_lagrange(deg, t, L.data());
      const Eigen::Vector2d val = u(a + t * (b - a));
      for (int i = 0; i <= deg; ++i) {
        const int pi = (static_cast<int>(e) * deg + i) % nb;
        for (int comp = 0; comp < 2; ++comp)
          rhs[2 * pi + comp] += ell * eq.weights[q] * L[i] * val[comp];
      }
    }
  }
  return solve_bordered_trace(sys, rhs);
}

Eigen::VectorXd project_boundary_coefficients(const AssembledSystem& sys,
                                              const Eigen::VectorXd& u) {
  return solve_bordered_trace(sys, sys.SGammaGamma * u);
}

}  // namespace sdbc
