#pragma once

#include <Eigen/Dense>

#include <array>
#include <string>
#include <utility>
#include <vector>

namespace sdbc {

enum class DomainKind { UnitSquare, LShape };

/// Polygonal computational domain. Corners are listed in counterclockwise
/// boundary order; `greatest_angle` is the largest interior angle.
struct Domain {
  DomainKind kind = DomainKind::UnitSquare;
  std::vector<Eigen::Vector2d> corners;
  double greatest_angle = 0.0;

  static Domain unit_square();
  static Domain l_shape();

  double area() const { return kind == DomainKind::UnitSquare ? 1.0 : 3.0; }
  double perimeter() const { return kind == DomainKind::UnitSquare ? 4.0 : 8.0; }
  int n_corners() const { return static_cast<int>(corners.size()); }
};

/// Directed boundary edge (a -> b counterclockwise), with outward unit
/// normal and the index of the straight boundary segment it belongs to.
struct BoundaryEdge {
  int a = -1;
  int b = -1;
  Eigen::Vector2d normal = Eigen::Vector2d::Zero();
  int segment = -1;
};

/// Structured triangulation of level i: each unit cell is subdivided into
/// 2^i x 2^i squares, each split along the bottom-left -> top-right
/// diagonal. All vertex coordinates are dyadic, so nested levels share
/// vertices bit-exactly.
struct Mesh {
  Domain domain;
  int level = 0;
  double h = 0.0;  // 2^-level * sqrt(2)

  std::vector<Eigen::Vector2d> vertices;
  std::vector<std::array<int, 3>> triangles;  // CCW vertex triples
  std::vector<BoundaryEdge> boundary_edges;   // closed CCW chain from corners[0]
  std::vector<bool> vertex_on_boundary;
  std::vector<int> corner_vertex;  // vertex index of each domain corner

  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int n_triangles() const { return static_cast<int>(triangles.size()); }
  double triangle_area(int t) const;
  double cell_size() const { return std::ldexp(1.0, -level); }

  /// Triangle containing `p` (points on edges resolve to either neighbor).
  int locate(const Eigen::Vector2d& p) const;
};

Mesh build_mesh(const Domain& domain, int level);

/// Vertices coinciding with the domain corners, in boundary order.
std::vector<std::pair<int, Eigen::Vector2d>> corner_nodes(const Mesh& mesh);

}  // namespace sdbc
