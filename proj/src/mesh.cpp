#include "sdbc/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace sdbc {

Domain Domain::unit_square() {
  Domain d;
  d.kind = DomainKind::UnitSquare;
  d.corners = {{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}};
  d.greatest_angle = M_PI / 2.0;
  return d;
}

Domain Domain::l_shape() {
  // (-1,1)^2 minus the open top-right quadrant; reentrant corner at the origin.
  Domain d;
  d.kind = DomainKind::LShape;
  d.corners = {{-1.0, -1.0}, {1.0, -1.0}, {1.0, 0.0}, {0.0, 0.0}, {0.0, 1.0}, {-1.0, 1.0}};
  d.greatest_angle = 3.0 * M_PI / 2.0;
  return d;
}

double Mesh::triangle_area(int t) const {
  const auto& tri = triangles[t];
  const Eigen::Vector2d e1 = vertices[tri[1]] - vertices[tri[0]];
  const Eigen::Vector2d e2 = vertices[tri[2]] - vertices[tri[0]];
  return 0.5 * (e1.x() * e2.y() - e1.y() * e2.x());
}

namespace {

bool on_segment(const Eigen::Vector2d& p, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  // Segments of both domains are axis-aligned and all coordinates dyadic,
  // so exact comparisons are safe.
  if (a.x() == b.x()) {
    return p.x() == a.x() && p.y() >= std::min(a.y(), b.y()) && p.y() <= std::max(a.y(), b.y());
  }
  return p.y() == a.y() && p.x() >= std::min(a.x(), b.x()) && p.x() <= std::max(a.x(), b.x());
}

void finish_boundary(Mesh& mesh) {
  // Boundary edges are those adjacent to exactly one triangle; the directed
  // edge of a CCW triangle runs counterclockwise along the boundary.
  std::map<std::pair<int, int>, std::pair<int, int>> edges;  // undirected -> (count, directed a)
  for (const auto& tri : mesh.triangles) {
    for (int k = 0; k < 3; ++k) {
      const int a = tri[k];
      const int b = tri[(k + 1) % 3];
      auto key = std::minmax(a, b);
      auto it = edges.find(key);
      if (it == edges.end()) {
        edges[key] = {1, a};
      } else {
        it->second.first += 1;
      }
    }
  }

  std::map<int, BoundaryEdge> outgoing;  // start vertex -> edge
  mesh.vertex_on_boundary.assign(mesh.vertices.size(), false);
  for (const auto& [key, val] : edges) {
    if (val.first != 1) continue;
    BoundaryEdge e;
    e.a = val.second;
    e.b = (key.first == e.a) ? key.second : key.first;
    const Eigen::Vector2d d = mesh.vertices[e.b] - mesh.vertices[e.a];
    e.normal = Eigen::Vector2d(d.y(), -d.x()).normalized();
    const Eigen::Vector2d mid = 0.5 * (mesh.vertices[e.a] + mesh.vertices[e.b]);
    const int nc = mesh.domain.n_corners();
    for (int s = 0; s < nc; ++s) {
      if (on_segment(mid, mesh.domain.corners[s], mesh.domain.corners[(s + 1) % nc])) {
        e.segment = s;
        break;
      }
    }
    if (e.segment < 0) throw std::logic_error("boundary edge not on any domain segment");
    outgoing[e.a] = e;
    mesh.vertex_on_boundary[e.a] = true;
    mesh.vertex_on_boundary[e.b] = true;
  }

  mesh.corner_vertex.assign(mesh.domain.n_corners(), -1);
  for (int v = 0; v < mesh.n_vertices(); ++v) {
    for (int s = 0; s < mesh.domain.n_corners(); ++s) {
      const Eigen::Vector2d& c = mesh.domain.corners[s];
      if (mesh.vertices[v].x() == c.x() && mesh.vertices[v].y() == c.y()) mesh.corner_vertex[s] = v;
    }
  }
  for (int v : mesh.corner_vertex)
    if (v < 0) throw std::logic_error("domain corner is not a mesh vertex");

  // Chain into a closed CCW loop starting at the first corner.
  mesh.boundary_edges.clear();
  mesh.boundary_edges.reserve(outgoing.size());
  const int start = mesh.corner_vertex[0];
  int cur = start;
  do {
    auto it = outgoing.find(cur);
    if (it == outgoing.end()) throw std::logic_error("boundary chain is broken");
    mesh.boundary_edges.push_back(it->second);
    cur = it->second.b;
  } while (cur != start);
  if (mesh.boundary_edges.size() != outgoing.size())
    throw std::logic_error("boundary has more than one loop");
}

}  // namespace

Mesh build_mesh(const Domain& domain, int level) {
  if (level < 0) throw std::invalid_argument("build_mesh: level must be >= 0");
  Mesh mesh;
  mesh.domain = domain;
  mesh.level = level;
  mesh.h = std::ldexp(std::sqrt(2.0), -level);

  const int n = 1 << level;
  if (domain.kind == DomainKind::UnitSquare) {
    mesh.vertices.reserve((n + 1) * (n + 1));
    for (int gy = 0; gy <= n; ++gy)
      for (int gx = 0; gx <= n; ++gx)
        mesh.vertices.emplace_back(double(gx) / n, double(gy) / n);
    auto vid = [n](int gx, int gy) { return gy * (n + 1) + gx; };
    mesh.triangles.reserve(2 * n * n);
    for (int gy = 0; gy < n; ++gy)
      for (int gx = 0; gx < n; ++gx) {
        const int v00 = vid(gx, gy), v10 = vid(gx + 1, gy);
        const int v01 = vid(gx, gy + 1), v11 = vid(gx + 1, gy + 1);
        mesh.triangles.push_back({v00, v10, v11});
        mesh.triangles.push_back({v00, v11, v01});
      }
  } else {
    // Grid over [-1,1]^2 with the top-right quadrant removed: a grid node
    // (gx, gy) is kept unless gx > n and gy > n; a cell is kept unless
    // gx >= n and gy >= n.
    const int g = 2 * n;
    std::vector<int> id((g + 1) * (g + 1), -1);
    int next = 0;
    for (int gy = 0; gy <= g; ++gy)
      for (int gx = 0; gx <= g; ++gx) {
        if (gx > n && gy > n) continue;
        id[gy * (g + 1) + gx] = next++;
        mesh.vertices.emplace_back(-1.0 + double(gx) / n, -1.0 + double(gy) / n);
      }
    auto vid = [&](int gx, int gy) { return id[gy * (g + 1) + gx]; };
    mesh.triangles.reserve(6 * n * n);
    for (int gy = 0; gy < g; ++gy)
      for (int gx = 0; gx < g; ++gx) {
        if (gx >= n && gy >= n) continue;
        const int v00 = vid(gx, gy), v10 = vid(gx + 1, gy);
        const int v01 = vid(gx, gy + 1), v11 = vid(gx + 1, gy + 1);
        mesh.triangles.push_back({v00, v10, v11});
        mesh.triangles.push_back({v00, v11, v01});
      }
  }

  finish_boundary(mesh);
  return mesh;
}

int Mesh::locate(const Eigen::Vector2d& p) const {
  const int n = 1 << level;
  const double d = cell_size();
  auto clampi = [](int v, int lo, int hi) { return std::max(lo, std::min(hi, v)); };

  int gx, gy, cell;
  if (domain.kind == DomainKind::UnitSquare) {
    gx = clampi(static_cast<int>(std::floor(p.x() * n)), 0, n - 1);
    gy = clampi(static_cast<int>(std::floor(p.y() * n)), 0, n - 1);
    cell = gy * n + gx;
  } else {
    const int g = 2 * n;
    gx = clampi(static_cast<int>(std::floor((p.x() + 1.0) * n)), 0, g - 1);
    gy = clampi(static_cast<int>(std::floor((p.y() + 1.0) * n)), 0, g - 1);
    if (gx >= n && gy >= n) {
      // Point on the reentrant boundary: shift into the adjacent kept cell.
      if (gx == n)
        gx = n - 1;
      else if (gy == n)
        gy = n - 1;
      else
        throw std::domain_error("Mesh::locate: point outside the L-shaped domain");
    }
    cell = (gy < n) ? gy * g + gx : n * g + (gy - n) * n + gx;
  }

  const Eigen::Vector2d v00 = vertices[triangles[2 * cell][0]];
  const double u = (p.x() - v00.x()) / d;
  const double v = (p.y() - v00.y()) / d;
  return (v <= u) ? 2 * cell : 2 * cell + 1;
}

std::vector<std::pair<int, Eigen::Vector2d>> corner_nodes(const Mesh& mesh) {
  std::vector<std::pair<int, Eigen::Vector2d>> out;
  out.reserve(mesh.corner_vertex.size());
  for (std::size_t s = 0; s < mesh.corner_vertex.size(); ++s)
    out.emplace_back(mesh.corner_vertex[s], mesh.domain.corners[s]);
  return out;
}

}  // namespace sdbc
