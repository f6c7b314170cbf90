#include "sdbc/fem.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace sdbc {

ElementFamily ElementFamily::make(ElementKind k) {
  switch (k) {
    case ElementKind::Mini: return mini();
    case ElementKind::TH2: return th2();
    case ElementKind::TH3: return th3();
  }
  throw std::invalid_argument("unknown element kind");
}

int ElementFamily::local_velocity_nodes() const {
  switch (kind) {
    case ElementKind::Mini: return 4;
    case ElementKind::TH2: return 6;
    case ElementKind::TH3: return 10;
  }
  return 0;
}

int ElementFamily::local_pressure_nodes() const { return pressure_degree == 1 ? 3 : 6; }

const char* ElementFamily::name() const {
  switch (kind) {
    case ElementKind::Mini: return "mini";
    case ElementKind::TH2: return "th2";
    case ElementKind::TH3: return "th3";
  }
  return "?";
}

namespace {

// dl/d(xi,eta) for l = (1 - xi - eta, xi, eta)
const Eigen::Vector2d kGradL[3] = {{-1.0, -1.0}, {1.0, 0.0}, {0.0, 1.0}};

constexpr int kEdgeVertex[3][2] = {{0, 1}, {1, 2}, {2, 0}};

void eval_p1(const std::array<double, 3>& l, double* v, Eigen::Vector2d* g) {
  for (int i = 0; i < 3; ++i) {
    v[i] = l[i];
    if (g) g[i] = kGradL[i];
  }
}

void eval_p2(const std::array<double, 3>& l, double* v, Eigen::Vector2d* g) {
  for (int i = 0; i < 3; ++i) {
    v[i] = l[i] * (2.0 * l[i] - 1.0);
    if (g) g[i] = (4.0 * l[i] - 1.0) * kGradL[i];
  }
  for (int e = 0; e < 3; ++e) {
    const int i = kEdgeVertex[e][0], j = kEdgeVertex[e][1];
    v[3 + e] = 4.0 * l[i] * l[j];
    if (g) g[3 + e] = 4.0 * (l[j] * kGradL[i] + l[i] * kGradL[j]);
  }
}

void eval_p3(const std::array<double, 3>& l, double* v, Eigen::Vector2d* g) {
  for (int i = 0; i < 3; ++i) {
    const double li = l[i];
    v[i] = 0.5 * li * (3.0 * li - 1.0) * (3.0 * li - 2.0);
    if (g) g[i] = 0.5 * (27.0 * li * li - 18.0 * li + 2.0) * kGradL[i];
  }
  // two nodes per edge; slot 0 nearer the first local edge vertex
  for (int e = 0; e < 3; ++e) {
    const int i = kEdgeVertex[e][0], j = kEdgeVertex[e][1];
    const double li = l[i], lj = l[j];
    v[3 + 2 * e] = 4.5 * li * lj * (3.0 * li - 1.0);
    v[3 + 2 * e + 1] = 4.5 * li * lj * (3.0 * lj - 1.0);
    if (g) {
      g[3 + 2 * e] = 4.5 * (lj * (6.0 * li - 1.0) * kGradL[i] + li * (3.0 * li - 1.0) * kGradL[j]);
      g[3 + 2 * e + 1] =
          4.5 * (lj * (3.0 * lj - 1.0) * kGradL[i] + li * (6.0 * lj - 1.0) * kGradL[j]);
    }
  }
  v[9] = 27.0 * l[0] * l[1] * l[2];
  if (g)
    g[9] = 27.0 * (l[1] * l[2] * kGradL[0] + l[0] * l[2] * kGradL[1] + l[0] * l[1] * kGradL[2]);
}

}  // namespace

void eval_velocity_basis(const ElementFamily& fam, const std::array<double, 3>& l, double* v,
                         Eigen::Vector2d* g) {
  switch (fam.kind) {
    case ElementKind::Mini:
      eval_p1(l, v, g);
      v[3] = 27.0 * l[0] * l[1] * l[2];
      if (g)
        g[3] =
            27.0 * (l[1] * l[2] * kGradL[0] + l[0] * l[2] * kGradL[1] + l[0] * l[1] * kGradL[2]);
      break;
    case ElementKind::TH2: eval_p2(l, v, g); break;
    case ElementKind::TH3: eval_p3(l, v, g); break;
  }
}

void eval_pressure_basis(const ElementFamily& fam, const std::array<double, 3>& l, double* v) {
  if (fam.pressure_degree == 1)
    eval_p1(l, v, nullptr);
  else
    eval_p2(l, v, nullptr);
}

void eval_line_lagrange(int degree, double t, double* values) {
  const int n = degree + 1;
  for (int j = 0; j < n; ++j) {
    double prod = 1.0;
    const double tj = double(j) / degree;
    for (int m = 0; m < n; ++m) {
      if (m == j) continue;
      const double tm = double(m) / degree;
      prod *= (t - tm) / (tj - tm);
    }
    values[j] = prod;
  }
}

Eigen::VectorXd FeSpace::scatter(const Eigen::VectorXd& interior,
                                 const Eigen::VectorXd& trace) const {
  Eigen::VectorXd full(N());
  full.head(N0()) = interior;
  full.tail(NGamma()) = trace;
  return full;
}

FeSpace build_space(const Mesh& mesh, const ElementFamily& family) {
  FeSpace sp;
  sp.mesh = &mesh;
  sp.family = family;

  const int V = mesh.n_vertices();
  const int T = mesh.n_triangles();
  const int k_edge = family.edge_nodes_per_edge();

  // Unique edge table; endpoints stored (lo, hi).
  std::map<std::pair<int, int>, int> edge_id;
  std::vector<std::pair<int, int>> edges;
  for (const auto& tri : mesh.triangles) {
    for (int e = 0; e < 3; ++e) {
      auto key = std::minmax(tri[kEdgeVertex[e][0]], tri[kEdgeVertex[e][1]]);
      if (edge_id.emplace(key, static_cast<int>(edges.size())).second) edges.push_back(key);
    }
  }
  const int E = static_cast<int>(edges.size());

  std::vector<bool> edge_on_boundary(E, false);
  for (const auto& be : mesh.boundary_edges) {
    auto key = std::minmax(be.a, be.b);
    edge_on_boundary[edge_id.at(key)] = true;
  }

  // Raw scalar node ids: vertices, then edge nodes, then cell nodes.
  const int first_edge_node = V;
  const int first_cell_node = V + E * k_edge;
  sp.n_scalar = first_cell_node + (family.has_cell_node() ? T : 0);

  sp.node_coords.resize(sp.n_scalar);
  sp.node_is_bubble.assign(sp.n_scalar, false);
  std::vector<bool> node_boundary(sp.n_scalar, false);
  for (int v = 0; v < V; ++v) {
    sp.node_coords[v] = mesh.vertices[v];
    node_boundary[v] = mesh.vertex_on_boundary[v];
  }
  for (int e = 0; e < E; ++e) {
    const Eigen::Vector2d lo = mesh.vertices[edges[e].first];
    const Eigen::Vector2d hi = mesh.vertices[edges[e].second];
    for (int t = 0; t < k_edge; ++t) {
      const double s = double(t + 1) / family.velocity_degree;
      sp.node_coords[first_edge_node + e * k_edge + t] = (1.0 - s) * lo + s * hi;
      node_boundary[first_edge_node + e * k_edge + t] = edge_on_boundary[e];
    }
  }
  if (family.has_cell_node()) {
    for (int t = 0; t < T; ++t) {
      const auto& tri = mesh.triangles[t];
      sp.node_coords[first_cell_node + t] =
          (mesh.vertices[tri[0]] + mesh.vertices[tri[1]] + mesh.vertices[tri[2]]) / 3.0;
      sp.node_is_bubble[first_cell_node + t] = family.has_bubble;
    }
  }

  // Cell-local -> raw node maps. For TH3 edge nodes, global slot 0 is the
  // node nearer the lower-numbered endpoint.
  sp.cell_velocity_nodes.resize(T);
  for (int t = 0; t < T; ++t) {
    const auto& tri = mesh.triangles[t];
    auto& loc = sp.cell_velocity_nodes[t];
    loc.fill(-1);
    loc[0] = tri[0];
    loc[1] = tri[1];
    loc[2] = tri[2];
    int next = 3;
    for (int e = 0; e < 3 && k_edge > 0; ++e) {
      const int gi = tri[kEdgeVertex[e][0]], gj = tri[kEdgeVertex[e][1]];
      const int id = edge_id.at(std::minmax(gi, gj));
      if (k_edge == 1) {
        loc[next++] = first_edge_node + id;
      } else {
        const bool fwd = gi < gj;
        loc[next++] = first_edge_node + id * 2 + (fwd ? 0 : 1);
        loc[next++] = first_edge_node + id * 2 + (fwd ? 1 : 0);
      }
    }
    if (family.has_cell_node()) loc[family.local_velocity_nodes() - 1] = first_cell_node + t;
  }

  // Pressure DOFs: vertices (+ edge midpoints for P2); pressure is not
  // constrained on the boundary so any deterministic numbering works.
  sp.n_pressure = family.pressure_degree == 1 ? V : V + E;
  sp.cell_pressure_nodes.resize(T);
  for (int t = 0; t < T; ++t) {
    const auto& tri = mesh.triangles[t];
    auto& loc = sp.cell_pressure_nodes[t];
    loc.fill(-1);
    loc[0] = tri[0];
    loc[1] = tri[1];
    loc[2] = tri[2];
    if (family.pressure_degree == 2) {
      for (int e = 0; e < 3; ++e) {
        const int id = edge_id.at(std::minmax(tri[kEdgeVertex[e][0]], tri[kEdgeVertex[e][1]]));
        loc[3 + e] = V + id;
      }
    }
  }

  // Trace nodes in CCW arc order: per boundary edge, the start vertex then
  // the edge-interior nodes ordered along the walk direction.
  const double ell = mesh.cell_size();
  double s0 = 0.0;
  sp.trace_nodes.clear();
  sp.trace_arclength.clear();
  for (const auto& be : mesh.boundary_edges) {
    sp.trace_nodes.push_back(be.a);
    sp.trace_arclength.push_back(s0);
    const int id = edge_id.at(std::minmax(be.a, be.b));
    for (int t = 0; t < k_edge; ++t) {
      int slot = t;
      if (k_edge == 2 && be.a > be.b) slot = 1 - t;  // walk runs hi -> lo
      sp.trace_nodes.push_back(first_edge_node + id * k_edge + slot);
      sp.trace_arclength.push_back(s0 + ell * double(t + 1) / family.velocity_degree);
    }
    s0 += ell;
  }

  sp.n_boundary_scalar = static_cast<int>(sp.trace_nodes.size());
  sp.n_interior_scalar = sp.n_scalar - sp.n_boundary_scalar;

  // Interior-first ranks; boundary ranks follow the arc order.
  sp.node_rank.assign(sp.n_scalar, -1);
  for (int i = 0; i < sp.n_boundary_scalar; ++i)
    sp.node_rank[sp.trace_nodes[i]] = sp.n_interior_scalar + i;
  int next_rank = 0;
  for (int n = 0; n < sp.n_scalar; ++n) {
    if (node_boundary[n]) continue;
    sp.node_rank[n] = next_rank++;
  }
  if (next_rank != sp.n_interior_scalar)
    throw std::logic_error("build_space: boundary node bookkeeping is inconsistent");

  return sp;
}

Eigen::VectorXd interpolate_velocity(const FeSpace& sp, const VelocityField& f) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(sp.N());
  for (int n = 0; n < sp.n_scalar; ++n) {
    if (sp.node_is_bubble[n]) continue;
    const Eigen::Vector2d val = f(sp.node_coords[n]);
    out[sp.dof(n, 0)] = val.x();
    out[sp.dof(n, 1)] = val.y();
  }
  return out;
}

Eigen::Vector2d evaluate_velocity(const FeSpace& sp, const Eigen::VectorXd& coeffs,
                                  const Eigen::Vector2d& p) {
  const Mesh& mesh = *sp.mesh;
  const int t = mesh.locate(p);
  const auto& tri = mesh.triangles[t];
  const Eigen::Vector2d p0 = mesh.vertices[tri[0]];
  Eigen::Matrix2d J;
  J.col(0) = mesh.vertices[tri[1]] - p0;
  J.col(1) = mesh.vertices[tri[2]] - p0;
  const Eigen::Vector2d xi = J.inverse() * (p - p0);
  const std::array<double, 3> l = {1.0 - xi.x() - xi.y(), xi.x(), xi.y()};

  double v[10];
  eval_velocity_basis(sp.family, l, v, nullptr);
  Eigen::Vector2d out = Eigen::Vector2d::Zero();
  for (int i = 0; i < sp.family.local_velocity_nodes(); ++i) {
    const int n = sp.cell_velocity_nodes[t][i];
    out.x() += v[i] * coeffs[sp.dof(n, 0)];
    out.y() += v[i] * coeffs[sp.dof(n, 1)];
  }
  return out;
}

}  // namespace sdbc
