#include "sdbc/analysis.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

namespace sdbc {

namespace {

using Complex = std::complex<double>;

// Newton search for roots of sin(z w) = sign * z * sin(w) over a grid of
// complex starting points. Roots come in +/- and conjugate pairs, so the
// grid only covers Re > 0, Im >= 0.
std::vector<Complex> branch_roots(double omega, double sign) {
  const double so = std::sin(omega);
  const auto g = [&](Complex z) { return std::sin(z * omega) - sign * z * so; };
  const auto dg = [&](Complex z) { return omega * std::cos(z * omega) - sign * so; };

  std::vector<Complex> roots;
  for (double re = 0.05; re <= 4.51; re += 0.15) {
    for (double im = 0.0; im <= 3.01; im += 0.25) {
      Complex z(re, im);
      bool ok = false;
      for (int it = 0; it < 60; ++it) {
        const Complex gz = g(z);
        if (std::abs(gz) < 1e-12) {
          ok = true;
          break;
        }
        const Complex d = dg(z);
        if (std::abs(d) < 1e-300) break;
        z -= gz / d;
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) break;
      }
      if (!ok) continue;
      z = Complex(z.real(), std::abs(z.imag()));
      if (z.real() <= 1e-8) continue;
      bool dup = false;
      for (const Complex& r : roots)
        if (std::abs(r - z) < 1e-8) {
          dup = true;
          break;
        }
      if (!dup) roots.push_back(z);
    }
  }
  return roots;
}

}  // namespace

SingularExponent singular_exponent(double omega) {
  if (omega <= 0.0 || omega > 2.0 * M_PI)
    throw std::invalid_argument("singular_exponent: omega must lie in (0, 2*pi]");

  std::vector<Complex> plus = branch_roots(omega, +1.0);
  const std::vector<Complex> minus = branch_roots(omega, -1.0);

  // z = 1 solves sin(z w) = +z sin(w) for every w without carrying a
  // singular solution; the physical branch crosses 1 only at w = pi,
  // where it also appears on the minus branch.
  std::erase_if(plus, [](const Complex& z) { return std::abs(z - 1.0) < 1e-8; });

  double best = std::numeric_limits<double>::infinity();
  for (const Complex& z : plus) best = std::min(best, z.real());
  for (const Complex& z : minus) best = std::min(best, z.real());
  if (!std::isfinite(best)) throw std::runtime_error("singular_exponent: no root found");

  SingularExponent out;
  out.omega = omega;
  out.xi = best;
  out.s_star = std::min(out.xi - 0.5, 0.5);
  out.rate = std::min(1.0, out.xi);
  return out;
}

double error_l2_gamma(const AssembledSystem& ref, const Eigen::VectorXd& e) {
  return std::sqrt(std::max(0.0, e.dot(ref.SGammaGamma * e)));
}

double error_h12_gamma(const ControlOperator& ref_op, const Eigen::VectorXd& e) {
  return std::sqrt(std::max(0.0, e.dot(ref_op.apply_D(e))));
}

Eigen::VectorXd prolong_trace(const FeSpace& coarse, const Eigen::VectorXd& u_coarse,
                              const FeSpace& fine) {
  if (coarse.mesh->domain.kind != fine.mesh->domain.kind ||
      coarse.family.velocity_degree != fine.family.velocity_degree ||
      coarse.mesh->level > fine.mesh->level)
    throw std::invalid_argument("prolong_trace: spaces are not nested");

  const int deg = coarse.family.velocity_degree;
  const int nbc = coarse.n_boundary_scalar;
  const double ell_c = coarse.mesh->cell_size();
  const double perimeter = coarse.mesh->domain.perimeter();

  Eigen::VectorXd out(fine.NGamma());
  std::vector<double> L(deg + 1);
  for (int i = 0; i < fine.n_boundary_scalar; ++i) {
    double s = fine.trace_arclength[i];
    if (s >= perimeter) s -= perimeter;
    int edge = static_cast<int>(std::floor(s / ell_c));
    const int n_edges = static_cast<int>(coarse.mesh->boundary_edges.size());
    if (edge >= n_edges) edge = n_edges - 1;
    const double t = s / ell_c - edge;
    eval_line_lagrange(deg, t, L.data());
    for (int comp = 0; comp < 2; ++comp) {
      double val = 0.0;
      for (int j = 0; j <= deg; ++j) {
        const int pos = (edge * deg + j) % nbc;
        val += L[j] * u_coarse[2 * pos + comp];
      }
      out[2 * i + comp] = val;
    }
  }
  return out;
}

Eigen::VectorXd prolong_velocity(const FeSpace& coarse, const Eigen::VectorXd& coeffs,
                                 const FeSpace& fine) {
  if (coarse.mesh->domain.kind != fine.mesh->domain.kind ||
      coarse.family.kind != fine.family.kind || coarse.mesh->level > fine.mesh->level)
    throw std::invalid_argument("prolong_velocity: spaces are not nested");

  Eigen::VectorXd out = Eigen::VectorXd::Zero(fine.N());
  for (int n = 0; n < fine.n_scalar; ++n) {
    if (fine.node_is_bubble[n]) continue;
    const Eigen::Vector2d val = evaluate_velocity(coarse, coeffs, fine.node_coords[n]);
    out[fine.dof(n, 0)] = val.x();
    out[fine.dof(n, 1)] = val.y();
  }
  if (fine.family.has_bubble) {
    // Bubble coefficient of the interpolant: centroid value minus the P1 part.
    const int nv = fine.family.local_velocity_nodes();
    for (int t = 0; t < fine.mesh->n_triangles(); ++t) {
      const auto& loc = fine.cell_velocity_nodes[t];
      const int bn = loc[nv - 1];
      const Eigen::Vector2d val = evaluate_velocity(coarse, coeffs, fine.node_coords[bn]);
      for (int comp = 0; comp < 2; ++comp) {
        const double p1 = (out[fine.dof(loc[0], comp)] + out[fine.dof(loc[1], comp)] +
                           out[fine.dof(loc[2], comp)]) /
                          3.0;
        out[fine.dof(bn, comp)] = val[comp] - p1;
      }
    }
  }
  return out;
}

Eigen::VectorXd zero_mean_pressure(const AssembledSystem& sys,
                                   const Eigen::VectorXd& pressure_pinned) {
  const int M = sys.Mp();
  Eigen::VectorXd full(M);
  int j = 0;
  for (int i = 0; i < M; ++i) full[i] = (i == sys.pinned_pressure) ? 0.0 : pressure_pinned[j++];
  const double mean = sys.pressure_integral.dot(full) / sys.space->mesh->domain.area();
  full.array() -= mean;
  return full;
}

std::vector<double> corner_residuals(const AssembledSystem& sys,
                                     const Eigen::VectorXd& pressure_pinned, double lambda0) {
  const Eigen::VectorXd q0 = zero_mean_pressure(sys, pressure_pinned);
  // Pressure DOFs at vertices come first, so a corner's pressure coefficient
  // index equals its vertex index.
  std::vector<double> out;
  for (int v : sys.space->mesh->corner_vertex) out.push_back(std::abs(q0[v] + lambda0));
  return out;
}

std::vector<double> convergence_rates(const std::vector<double>& errors) {
  std::vector<double> rates(errors.size(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 1; i < errors.size(); ++i) {
    if (errors[i] > 0.0 && errors[i - 1] > 0.0) rates[i] = std::log2(errors[i - 1] / errors[i]);
  }
  return rates;
}

}  // namespace sdbc
