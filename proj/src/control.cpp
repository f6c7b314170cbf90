#include "sdbc/control.hpp"

namespace sdbc {

const char* regularization_name(Regularization reg) {
  return reg == Regularization::EnergyH12 ? "h12" : "l2";
}

ControlOperator::ControlOperator(const SaddleSolver& solver, Regularization reg, double alpha)
    : solver_(&solver), reg_(reg), alpha_(alpha) {
  if (alpha <= 0.0) throw std::invalid_argument("ControlOperator: alpha must be positive");
}

Eigen::VectorXd ControlOperator::apply_E(const Eigen::VectorXd& u,
                                         Eigen::VectorXd* pressure) const {
  StokesSolution sol = solve_dirichlet(*solver_, u);
  if (pressure) *pressure = std::move(sol.pressure);
  return std::move(sol.velocity);
}

Eigen::VectorXd ControlOperator::apply_E_star(const Eigen::VectorXd& g) const {
  const AssembledSystem& s = sys();
  auto [z, q] = solve_adjoint(*solver_, g);
  return -(s.KGamma0 * z) - s.BtildeGamma.transpose() * q + s.MGamma * g;
}

Eigen::VectorXd ControlOperator::apply_D(const Eigen::VectorXd& u) const {
  const AssembledSystem& s = sys();
  Eigen::VectorXd p;
  const Eigen::VectorXd y = apply_E(u, &p);
  return s.KGamma * y + s.BtildeGamma.transpose() * p;
}

Eigen::VectorXd ControlOperator::apply_T(const Eigen::VectorXd& u) const {
  const AssembledSystem& s = sys();
  Eigen::VectorXd p;
  const Eigen::VectorXd y = apply_E(u, &p);
  auto [z, q] = solve_adjoint(*solver_, y);
  Eigen::VectorXd Tu = s.MGamma * y - s.KGamma0 * z - s.BtildeGamma.transpose() * q;
  if (reg_ == Regularization::EnergyH12)
    Tu += alpha_ * (s.KGamma * y + s.BtildeGamma.transpose() * p);
  else
    Tu += alpha_ * (s.SGammaGamma * u);
  return Tu;
}

Eigen::VectorXd ControlOperator::compute_w(const Eigen::VectorXd& y_dh) const {
  return apply_E_star(y_dh);
}

Eigen::VectorXd shift_target(const SaddleSolver& solver, const VelocityField& f,
                             const Eigen::VectorXd& y_dh) {
  const Eigen::VectorXd load = interior_load(solver.space(), f);
  const Eigen::VectorXd zero_trace = Eigen::VectorXd::Zero(solver.space().NGamma());
  const StokesSolution yf = solve_dirichlet(solver, zero_trace, &load);
  return y_dh - yf.velocity;
}

}  // namespace sdbc
