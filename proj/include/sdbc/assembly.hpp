#pragma once

#include "sdbc/fem.hpp"

#include <Eigen/Sparse>

#include <string>

namespace sdbc {

using SpMat = Eigen::SparseMatrix<double>;

/// Global sparse operators for the velocity space ordered interior-first.
/// `M` and `K` are the N x N vector mass and vector-Laplace stiffness,
/// `B = -[(chi_i, div zeta_j)]` the M x N divergence, and the Btilde
/// variants drop the pinned pressure row. Index convention: interior
/// velocity DOFs are [0, N0), boundary DOFs [N0, N).
struct AssembledSystem {
  const FeSpace* space = nullptr;

  SpMat M, K;  // N x N
  SpMat B;     // M x N

  SpMat Btilde, Btilde0, BtildeGamma;  // (M-1) x {N, N0, NGamma}

  SpMat M0, M00, MGamma0, MGammaGamma, MGamma;
  SpMat K00, KGamma0, KGammaGamma, KGamma;

  SpMat SGammaGamma;  // NGamma x NGamma boundary mass on the trace space

  Eigen::VectorXd c;                  // u^T c = (u_h . n, 1)_Gamma
  Eigen::VectorXd pressure_integral;  // (chi_i, 1), for zero-mean representatives
  int pinned_pressure = -1;

  int N() const { return space->N(); }
  int N0() const { return space->N0(); }
  int NGamma() const { return space->NGamma(); }
  int Mp() const { return space->M(); }
};

/// Assemble all operators. `pinned_pressure` < 0 selects the DOF with the
/// largest index (p_M = 0); other pins exist for pin-invariance checks.
AssembledSystem assemble(const FeSpace& space, int pinned_pressure = -1);

/// Interior velocity load (f, zeta_i) for i in [0, N0).
Eigen::VectorXd interior_load(const FeSpace& space, const VelocityField& f);

void write_matrix_market(const SpMat& A, const std::string& path);

}  // namespace sdbc
