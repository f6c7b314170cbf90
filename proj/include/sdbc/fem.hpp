#pragma once

#include "sdbc/mesh.hpp"

#include <Eigen/Dense>

#include <array>
#include <functional>
#include <vector>

namespace sdbc {

enum class ElementKind { Mini, TH2, TH3 };

/// Inf-sup stable velocity/pressure pairs: Mini (P1 + cubic bubble / P1),
/// Taylor-Hood P2-P1 and P3-P2.
struct ElementFamily {
  ElementKind kind = ElementKind::Mini;
  int velocity_degree = 1;  // Lagrange part of the velocity
  int pressure_degree = 1;
  bool has_bubble = true;

  static ElementFamily mini() { return {ElementKind::Mini, 1, 1, true}; }
  static ElementFamily th2() { return {ElementKind::TH2, 2, 1, false}; }
  static ElementFamily th3() { return {ElementKind::TH3, 3, 2, false}; }
  static ElementFamily make(ElementKind k);

  int local_velocity_nodes() const;  // scalar shape functions per triangle
  int local_pressure_nodes() const;
  int edge_nodes_per_edge() const { return velocity_degree - 1; }
  bool has_cell_node() const { return has_bubble || velocity_degree == 3; }

  // Exact assembly of all bilinear forms (including bubble-bubble mass terms)
  // needs volume degree >= 2*velocity_degree + 2.
  int volume_quadrature_degree() const { return kind == ElementKind::TH3 ? 8 : 6; }
  int edge_quadrature_points() const { return (2 * velocity_degree + 1 + 1) / 2 + 1; }

  const char* name() const;
};

/// Scalar velocity shape functions at barycentric point l; gradients are
/// with respect to the reference coordinates (l2, l3).
void eval_velocity_basis(const ElementFamily& fam, const std::array<double, 3>& l,
                         double* values, Eigen::Vector2d* grads);
void eval_pressure_basis(const ElementFamily& fam, const std::array<double, 3>& l, double* values);

/// Degree-k Lagrange basis on the equally spaced nodes {0, 1/k, ..., 1},
/// evaluated at t in [0,1]; writes k+1 values.
void eval_line_lagrange(int degree, double t, double* values);

/// Velocity/pressure DOF layout on a mesh. Scalar velocity nodes are ranked
/// interior-first: ranks [0, n_interior) are nodes whose basis functions
/// vanish on the boundary (including all bubble/cell nodes), ranks
/// [n_interior, n_scalar) traverse the boundary counterclockwise from the
/// first corner. A velocity DOF is 2*rank + component, so the first N0
/// DOFs vanish on the boundary and the trailing NGamma DOFs span the trace
/// space in arc-length order.
struct FeSpace {
  const Mesh* mesh = nullptr;
  ElementFamily family;

  int n_scalar = 0;
  int n_interior_scalar = 0;
  int n_boundary_scalar = 0;
  int n_pressure = 0;

  std::vector<Eigen::Vector2d> node_coords;  // by raw scalar node id
  std::vector<bool> node_is_bubble;
  std::vector<int> node_rank;  // raw scalar node id -> interior-first rank

  std::vector<std::array<int, 10>> cell_velocity_nodes;  // raw scalar ids
  std::vector<std::array<int, 6>> cell_pressure_nodes;

  std::vector<int> trace_nodes;          // raw scalar node ids, CCW arc order
  std::vector<double> trace_arclength;   // arc-length parameter of each trace node

  int N() const { return 2 * n_scalar; }
  int N0() const { return 2 * n_interior_scalar; }
  int NGamma() const { return 2 * n_boundary_scalar; }
  int M() const { return n_pressure; }

  int dof(int raw_node, int comp) const { return 2 * node_rank[raw_node] + comp; }
  double boundary_edge_length() const { return mesh->cell_size(); }

  /// Full velocity coefficient vector from interior part and trace part.
  Eigen::VectorXd scatter(const Eigen::VectorXd& interior, const Eigen::VectorXd& trace) const;
};

FeSpace build_space(const Mesh& mesh, const ElementFamily& family);

using VelocityField = std::function<Eigen::Vector2d(const Eigen::Vector2d&)>;

/// Nodal interpolant onto the velocity space; bubble coefficients are zero.
Eigen::VectorXd interpolate_velocity(const FeSpace& space, const VelocityField& f);

/// Point evaluation of a velocity coefficient vector (includes bubbles).
Eigen::Vector2d evaluate_velocity(const FeSpace& space, const Eigen::VectorXd& coeffs,
                                  const Eigen::Vector2d& p);

}  // namespace sdbc
