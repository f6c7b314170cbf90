#pragma once

#include "sdbc/stokes.hpp"

namespace sdbc {

enum class Regularization { EnergyH12, L2 };

const char* regularization_name(Regularization reg);

/// Discrete control operators on the trace space. All applications are
/// matrix-free: each one costs one or two saddle solves against the shared
/// factorization, so the object is cheap to construct and reentrant.
class ControlOperator {
 public:
  ControlOperator(const SaddleSolver& solver, Regularization reg, double alpha);

  /// E_h u: Stokes extension of the trace data (full N-vector). The pinned
  /// pressure of the extension is returned through `pressure` when given.
  Eigen::VectorXd apply_E(const Eigen::VectorXd& u, Eigen::VectorXd* pressure = nullptr) const;

  /// E_h^star g = -K_Gamma0 z - BtildeGamma^T q + M_Gamma g with (z, q) the
  /// homogeneous solve driven by M0 g.
  Eigen::VectorXd apply_E_star(const Eigen::VectorXd& g) const;

  /// Steklov-Poincare map D_h u = K_Gamma y + BtildeGamma^T p for the
  /// extension (y, p) of u.
  Eigen::VectorXd apply_D(const Eigen::VectorXd& u) const;

  /// T_h u = alpha D_h u + E_h^star E_h u (energy mode), or
  /// alpha S_GammaGamma u + E_h^star E_h u (L2 mode); evaluated by the
  /// state solve / adjoint solve / combination sequence.
  Eigen::VectorXd apply_T(const Eigen::VectorXd& u) const;

  /// Data functional w = E_h^star y_dh.
  Eigen::VectorXd compute_w(const Eigen::VectorXd& y_dh) const;

  const AssembledSystem& sys() const { return solver_->system(); }
  const SaddleSolver& solver() const { return *solver_; }
  const FeSpace& space() const { return solver_->space(); }
  Regularization regularization() const { return reg_; }
  double alpha() const { return alpha_; }

 private:
  const SaddleSolver* solver_;
  Regularization reg_;
  double alpha_;
};

/// Remark-1 source shift: returns y_dh - y^f_h where y^f_h solves the
/// homogeneous-Dirichlet problem with volume source f. The optimal control
/// of the shifted problem (with f = 0) equals that of the original problem.
Eigen::VectorXd shift_target(const SaddleSolver& solver, const VelocityField& f,
                             const Eigen::VectorXd& y_dh);

}  // namespace sdbc
