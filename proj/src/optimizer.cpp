#include "sdbc/optimizer.hpp"

#include <cmath>
#include <vector>

namespace sdbc {

namespace {

using Triplet = Eigen::Triplet<double>;

Eigen::VectorXd sparse_diagonal(const SpMat& A) {
  Eigen::VectorXd d = Eigen::VectorXd::Zero(A.rows());
  for (int col = 0; col < A.outerSize(); ++col)
    for (SpMat::InnerIterator it(A, col); it; ++it)
      if (it.row() == col) d[col] += it.value();
  return d;
}

void append_block(std::vector<Triplet>& trip, const SpMat& A, int r0, int c0,
                  double scale = 1.0) {
  for (int col = 0; col < A.outerSize(); ++col)
    for (SpMat::InnerIterator it(A, col); it; ++it)
      trip.emplace_back(r0 + it.row(), c0 + col, scale * it.value());
}

// T u - w is a multiple of c at the optimum; its c-component is lambda.
// Assembled from the already-computed state and difference-driven adjoint.
Eigen::VectorXd gradient_vector(const ControlOperator& op, const Eigen::VectorXd& u,
                                const Eigen::VectorXd& y, const Eigen::VectorXd& p,
                                const Eigen::VectorXd& z, const Eigen::VectorXd& q,
                                const Eigen::VectorXd& y_dh) {
  const AssembledSystem& s = op.sys();
  Eigen::VectorXd g = s.MGamma * (y - y_dh) - s.KGamma0 * z - s.BtildeGamma.transpose() * q;
  if (op.regularization() == Regularization::EnergyH12)
    g += op.alpha() * (s.KGamma * y + s.BtildeGamma.transpose() * p);
  else
    g += op.alpha() * (s.SGammaGamma * u);
  return g;
}

void finish_solution(const ControlOperator& op, const Eigen::VectorXd& y_dh,
                     OptimalSolution& sol, bool adjoint_ready = false) {
  const AssembledSystem& s = op.sys();
  if (!adjoint_ready) {
    auto [z, q] = solve_adjoint(op.solver(), sol.velocity - y_dh);
    sol.adjoint = std::move(z);
    sol.adjoint_pressure = std::move(q);
  }

  const Eigen::VectorXd grad = gradient_vector(op, sol.control, sol.velocity, sol.pressure,
                                               sol.adjoint, sol.adjoint_pressure, y_dh);
  sol.lambda = s.c.dot(grad) / s.c.squaredNorm();
  const NullSpaceBasis Z = make_nullspace(s.c);
  sol.first_order_residual = Z.reduce(grad).norm();
  if (op.regularization() == Regularization::L2)
    sol.lambda0 = recover_lambda0(sol.lambda, op.space().mesh->domain.perimeter());

  auto [J, F] = evaluate_functionals(op, sol.control, sol.velocity, y_dh);
  sol.J = J;
  sol.F = F;
}

}  // namespace

Eigen::VectorXd NullSpaceBasis::expand(const Eigen::VectorXd& x) const {
  Eigen::VectorXd u(n());
  double pivot_val = 0.0;
  for (int j = 0, m = 0; m < n(); ++m) {
    if (m == pivot) continue;
    u[m] = x[j];
    pivot_val -= c[m] / c[pivot] * x[j];
    ++j;
  }
  u[pivot] = pivot_val;
  return u;
}

Eigen::VectorXd NullSpaceBasis::reduce(const Eigen::VectorXd& r) const {
  Eigen::VectorXd out(n() - 1);
  for (int j = 0, m = 0; m < n(); ++m) {
    if (m == pivot) continue;
    out[j] = r[m] - c[m] / c[pivot] * r[pivot];
    ++j;
  }
  return out;
}

SpMat NullSpaceBasis::matrix() const {
  std::vector<Triplet> trip;
  trip.reserve(2 * n());
  for (int j = 0, m = 0; m < n(); ++m) {
    if (m == pivot) continue;
    trip.emplace_back(m, j, 1.0);
    trip.emplace_back(pivot, j, -c[m] / c[pivot]);
    ++j;
  }
  SpMat Z(n(), n() - 1);
  Z.setFromTriplets(trip.begin(), trip.end());
  return Z;
}

NullSpaceBasis make_nullspace(const Eigen::VectorXd& c) {
  NullSpaceBasis basis;
  basis.c = c;
  c.cwiseAbs().maxCoeff(&basis.pivot);
  if (c[basis.pivot] == 0.0) throw std::invalid_argument("make_nullspace: c is zero");
  return basis;
}

OptimalSolution solve_reduced(const ControlOperator& op, const Eigen::VectorXd& w,
                              const Eigen::VectorXd& y_dh, const ReducedOptions& opts) {
  const AssembledSystem& s = op.sys();
  const NullSpaceBasis Z = make_nullspace(s.c);
  const int n = Z.n() - 1;

  Eigen::VectorXd diag = op.regularization() == Regularization::EnergyH12
                             ? (op.alpha() * sparse_diagonal(s.KGammaGamma) +
                                sparse_diagonal(s.MGammaGamma))
                             : (op.alpha() * sparse_diagonal(s.SGammaGamma) +
                                sparse_diagonal(s.MGammaGamma));
  Eigen::VectorXd prec(n);  // diag(Z^T diag(diag) Z)
  for (int j = 0, m = 0; m < Z.n(); ++m) {
    if (m == Z.pivot) continue;
    const double ratio = Z.c[m] / Z.c[Z.pivot];
    prec[j] = diag[m] + ratio * ratio * diag[Z.pivot];
    ++j;
  }

  const auto apply = [&](const Eigen::VectorXd& x) { return Z.reduce(op.apply_T(Z.expand(x))); };

  const Eigen::VectorXd b = Z.reduce(w);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd r = b;
  Eigen::VectorXd zv = r.cwiseQuotient(prec);
  Eigen::VectorXd p = zv;
  double rho = r.dot(zv);
  const double stop2 = opts.tol * opts.tol * rho;

  int it = 0;
  if (rho > 0.0) {
    for (; it < opts.max_iterations; ++it) {
      const Eigen::VectorXd Ap = apply(p);
      const double pAp = p.dot(Ap);
      if (pAp <= 0.0)
        throw SingularSystemError("reduced system is not positive definite (CG breakdown)");
      const double alpha = rho / pAp;
      x += alpha * p;
      r -= alpha * Ap;
      zv = r.cwiseQuotient(prec);
      const double rho_next = r.dot(zv);
      if (rho_next <= stop2) {
        ++it;
        rho = rho_next;
        break;
      }
      p = zv + (rho_next / rho) * p;
      rho = rho_next;
    }
    if (rho > stop2)
      throw SingularSystemError("conjugate gradients did not converge within max iterations");
  }

  OptimalSolution sol;
  sol.cg_iterations = it;
  sol.cg_residual = std::sqrt(std::max(0.0, rho));
  sol.control = Z.expand(x);
  sol.velocity = op.apply_E(sol.control, &sol.pressure);
  finish_solution(op, y_dh, sol);
  return sol;
}

OptimalSolution solve_big(const ControlOperator& op, const Eigen::VectorXd& y_dh) {
  const AssembledSystem& s = op.sys();
  const int N0 = s.N0();
  const int NG = s.NGamma();
  const int Mt = s.Mp() - 1;
  const double alpha = op.alpha();
  const NullSpaceBasis basis = make_nullspace(s.c);
  const SpMat Z = basis.matrix();
  const SpMat Zt = SpMat(Z.transpose());

  // Unknowns: (y_I, x, p, z, q).
  const int o1 = 0, o2 = N0, o3 = N0 + NG - 1, o4 = o3 + Mt, o5 = o4 + N0;
  const int dim = o5 + Mt;

  const SpMat KG0T_Z = SpMat(s.KGamma0.transpose() * Z);
  const SpMat BG_Z = SpMat(s.BtildeGamma * Z);
  const SpMat MG0T_Z = SpMat(s.MGamma0.transpose() * Z);

  std::vector<Triplet> trip;
  append_block(trip, s.K00, o1, o1);
  append_block(trip, KG0T_Z, o1, o2);
  append_block(trip, SpMat(s.Btilde0.transpose()), o1, o3);
  append_block(trip, s.Btilde0, o3, o1);
  append_block(trip, BG_Z, o3, o2);
  append_block(trip, s.M00, o4, o1, -1.0);
  append_block(trip, MG0T_Z, o4, o2, -1.0);
  append_block(trip, s.K00, o4, o4);
  append_block(trip, SpMat(s.Btilde0.transpose()), o4, o5);
  append_block(trip, s.Btilde0, o5, o4);

  if (op.regularization() == Regularization::EnergyH12) {
    const SpMat AG0 = SpMat(alpha * s.KGamma0 + s.MGamma0);
    const SpMat AGG = SpMat(alpha * s.KGammaGamma + s.MGammaGamma);
    append_block(trip, SpMat(Zt * AG0), o2, o1);
    append_block(trip, SpMat(Zt * SpMat(AGG * Z)), o2, o2);
    append_block(trip, SpMat(BG_Z.transpose()), o2, o3, alpha);
  } else {
    const SpMat AGG = SpMat(alpha * s.SGammaGamma + s.MGammaGamma);
    append_block(trip, SpMat(Zt * s.MGamma0), o2, o1);
    append_block(trip, SpMat(Zt * SpMat(AGG * Z)), o2, o2);
  }
  append_block(trip, SpMat(Zt * s.KGamma0), o2, o4, -1.0);
  append_block(trip, SpMat(BG_Z.transpose()), o2, o5, -1.0);

  SpMat A(dim, dim);
  A.setFromTriplets(trip.begin(), trip.end());

  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dim);
  rhs.segment(o4, N0) = -(s.M0 * y_dh);
  rhs.segment(o2, NG - 1) = basis.reduce(s.MGamma * y_dh);

  Eigen::SparseLU<SpMat> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success)
    throw SingularSystemError("big optimality system factorization failed");
  const Eigen::VectorXd sol_vec = lu.solve(rhs);

  OptimalSolution sol;
  sol.control = basis.expand(sol_vec.segment(o2, NG - 1));
  sol.velocity = op.space().scatter(sol_vec.segment(o1, N0), sol.control);
  sol.pressure = sol_vec.segment(o3, Mt);
  sol.adjoint = sol_vec.segment(o4, N0);
  sol.adjoint_pressure = sol_vec.segment(o5, Mt);
  finish_solution(op, y_dh, sol, /*adjoint_ready=*/true);
  return sol;
}

Eigen::VectorXd big_system_residuals(const ControlOperator& op, const Eigen::VectorXd& y_dh,
                                     const OptimalSolution& sol) {
  const AssembledSystem& s = op.sys();
  const NullSpaceBasis basis = make_nullspace(s.c);
  const Eigen::VectorXd yI = sol.velocity.head(s.N0());
  const Eigen::VectorXd& u = sol.control;
  const double alpha = op.alpha();

  const Eigen::VectorXd r1 = s.K00 * yI + s.KGamma0.transpose() * u +
                             s.Btilde0.transpose() * sol.pressure;
  const Eigen::VectorXd r2 = s.Btilde0 * yI + s.BtildeGamma * u;
  const Eigen::VectorXd r3 = s.K00 * sol.adjoint + s.Btilde0.transpose() * sol.adjoint_pressure -
                             s.M0 * (sol.velocity - y_dh);
  const Eigen::VectorXd r4 = s.Btilde0 * sol.adjoint;
  Eigen::VectorXd grad = gradient_vector(op, u, sol.velocity, sol.pressure, sol.adjoint,
                                         sol.adjoint_pressure, y_dh);
  const Eigen::VectorXd r5 = basis.reduce(grad);

  Eigen::VectorXd out(5);
  out << r1.norm(), r2.norm(), r3.norm(), r4.norm(), r5.norm();
  return out;
}

double recover_lambda0(double lambda, double boundary_length) {
  return -lambda / boundary_length;
}

std::pair<double, double> evaluate_functionals(const ControlOperator& op,
                                               const Eigen::VectorXd& control,
                                               const Eigen::VectorXd& velocity,
                                               const Eigen::VectorXd& y_dh) {
  const AssembledSystem& s = op.sys();
  const Eigen::VectorXd diff = velocity - y_dh;
  const double F = 0.5 * diff.dot(s.M * diff);
  double reg;
  if (op.regularization() == Regularization::EnergyH12) {
    // <D u, u> equals the gradient energy of the extension.
    reg = velocity.dot(s.K * velocity);
  } else {
    reg = control.dot(s.SGammaGamma * control);
  }
  return {F + 0.5 * op.alpha() * reg, F};
}

}  // namespace sdbc
