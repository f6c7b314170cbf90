#pragma once

#include "sdbc/control.hpp"

#include <vector>

namespace sdbc {

/// Corner-singularity data for the greatest interior angle omega:
/// xi is the real part of the smallest admissible root of
/// sin^2(z*omega) = z^2 sin^2(omega); s_star = min(xi - 1/2, 1/2) and
/// rate = min(1, xi) bound the attainable regularity and convergence order.
struct SingularExponent {
  double omega = 0.0;
  double xi = 0.0;
  double s_star = 0.0;
  double rate = 0.0;
};

SingularExponent singular_exponent(double omega);

/// sqrt(e^T S e) on the reference trace space.
double error_l2_gamma(const AssembledSystem& ref, const Eigen::VectorXd& e);

/// Steklov-Poincare energy sqrt(<D e, e>) on the reference space: the
/// gradient energy of the Stokes extension, an equivalent H^{1/2} seminorm.
double error_h12_gamma(const ControlOperator& ref_op, const Eigen::VectorXd& e);

/// Exact transfer of a coarse trace into a nested finer trace space
/// (piecewise-polynomial evaluation at the fine boundary nodes).
Eigen::VectorXd prolong_trace(const FeSpace& coarse, const Eigen::VectorXd& u_coarse,
                              const FeSpace& fine);

/// Nodal transfer of a coarse velocity field into a nested finer space.
/// Exact for the Taylor-Hood families (coarse restrictions are polynomials
/// of the fine space); the Mini bubble part is not representable on the
/// finer mesh, so fine bubble coefficients are interpolation values.
Eigen::VectorXd prolong_velocity(const FeSpace& coarse, const Eigen::VectorXd& coeffs,
                                 const FeSpace& fine);

/// |q0(x_j) + lambda0| at every domain corner, where q0 is the zero-mean
/// representative of the pinned adjoint pressure.
std::vector<double> corner_residuals(const AssembledSystem& sys,
                                     const Eigen::VectorXd& pressure_pinned, double lambda0);

/// Zero-mean representative of a pinned pressure vector (length M).
Eigen::VectorXd zero_mean_pressure(const AssembledSystem& sys,
                                   const Eigen::VectorXd& pressure_pinned);

/// rate_i = log2(err_{i-1} / err_i); NaN where undefined.
std::vector<double> convergence_rates(const std::vector<double>& errors);

}  // namespace sdbc
