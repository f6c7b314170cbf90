#pragma once

#include "sdbc/assembly.hpp"

#include <Eigen/SparseLU>

#include <stdexcept>
#include <utility>

namespace sdbc {

/// Thrown when the saddle factorization fails; signals an inf-sup violating
/// space or an assembly bug.
class SingularSystemError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct StokesSolution {
  Eigen::VectorXd velocity;  // full N-vector; boundary rows equal the trace data
  Eigen::VectorXd pressure;  // pinned representative, M-1
  double residual_momentum = 0.0;
  double residual_divergence = 0.0;
};

/// Sparse LU of the pinned saddle matrix [[K00, Btilde0^T], [Btilde0, 0]],
/// factorized once per space and reused for all state/adjoint solves.
class SaddleSolver {
 public:
  explicit SaddleSolver(const AssembledSystem& sys);

  /// Solves K00 v + Btilde0^T p = rv, Btilde0 v = rp.
  std::pair<Eigen::VectorXd, Eigen::VectorXd> solve(const Eigen::VectorXd& rv,
                                                    const Eigen::VectorXd& rp) const;

  const AssembledSystem& system() const { return *sys_; }
  const FeSpace& space() const { return *sys_->space; }

 private:
  const AssembledSystem* sys_;
  Eigen::SparseLU<SpMat> lu_;
};

/// Dirichlet state solve: trace data u (in the discrete trace space) and an
/// optional interior load F0.
StokesSolution solve_dirichlet(const SaddleSolver& solver, const Eigen::VectorXd& trace,
                               const Eigen::VectorXd* interior_load = nullptr);

/// Homogeneous-Dirichlet solve with L^2 source g (full N-vector of velocity
/// coefficients): K00 z + Btilde0^T q = M0 g, Btilde0 z = 0.
std::pair<Eigen::VectorXd, Eigen::VectorXd> solve_adjoint(const SaddleSolver& solver,
                                                          const Eigen::VectorXd& g);

/// Constrained L^2(Gamma) projection Q_h onto the discrete control space:
/// minimizes ||u_h - u||_{L^2(Gamma)} subject to u_h^T c = 0, via the
/// boundary mass system bordered by c.
Eigen::VectorXd project_boundary(const AssembledSystem& sys, const VelocityField& u);

/// Same projection applied to a coefficient vector already in the trace space.
Eigen::VectorXd project_boundary_coefficients(const AssembledSystem& sys,
                                              const Eigen::VectorXd& u);

}  // namespace sdbc
