#pragma once

#include "sdbc/control.hpp"

#include <limits>

namespace sdbc {

/// Null-space parameterization of {u : u^T c = 0}. The eliminated
/// coefficient is the one of largest magnitude in c; columns of Z carry a
/// single unit entry plus the pivot-row correction -c_i/c_k.
struct NullSpaceBasis {
  Eigen::VectorXd c;
  int pivot = 0;

  int n() const { return static_cast<int>(c.size()); }

  Eigen::VectorXd expand(const Eigen::VectorXd& x) const;         // u = Z x
  Eigen::VectorXd reduce(const Eigen::VectorXd& r) const;         // Z^T r
  SpMat matrix() const;                                           // explicit sparse Z
};

NullSpaceBasis make_nullspace(const Eigen::VectorXd& c);

struct OptimalSolution {
  Eigen::VectorXd control;           // NGamma
  Eigen::VectorXd velocity;          // N, boundary rows equal the control
  Eigen::VectorXd pressure;          // M-1, pinned
  Eigen::VectorXd adjoint;           // N0, driven by y - y_d
  Eigen::VectorXd adjoint_pressure;  // M-1, pinned

  double lambda = 0.0;
  double lambda0 = std::numeric_limits<double>::quiet_NaN();  // L2 mode only
  double J = 0.0;
  double F = 0.0;

  int cg_iterations = 0;
  double cg_residual = 0.0;
  double first_order_residual = 0.0;  // ||Z^T (T u - w)||
};

struct ReducedOptions {
  double tol = 1e-10;  // relative preconditioned residual
  int max_iterations = 5000;
};

/// Reduced QP: conjugate gradients on Z^T T Z x = Z^T w with matrix-free T,
/// Jacobi preconditioner from diag(alpha K_GammaGamma + M_GammaGamma)
/// (alpha S + M in L2 mode) pushed through Z.
OptimalSolution solve_reduced(const ControlOperator& op, const Eigen::VectorXd& w,
                              const Eigen::VectorXd& y_dh, const ReducedOptions& opts = {});

/// One sparse direct solve of the assembled five-block optimality system;
/// the oracle counterpart of solve_reduced.
OptimalSolution solve_big(const ControlOperator& op, const Eigen::VectorXd& y_dh);

/// Residuals of the five block equations of the big system at a solution.
Eigen::VectorXd big_system_residuals(const ControlOperator& op, const Eigen::VectorXd& y_dh,
                                     const OptimalSolution& sol);

double recover_lambda0(double lambda, double boundary_length);

/// (J, F): F is the tracking term 1/2 ||y - y_d||^2 in the mass norm; J adds
/// the regularization alpha/2 <D u, u> (energy) or alpha/2 (u,u)_Gamma (L2).
std::pair<double, double> evaluate_functionals(const ControlOperator& op,
                                               const Eigen::VectorXd& control,
                                               const Eigen::VectorXd& velocity,
                                               const Eigen::VectorXd& y_dh);

}  // namespace sdbc
