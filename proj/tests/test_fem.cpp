#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sdbc/fem.hpp"

#include <cmath>
#include <random>

using namespace sdbc;

namespace {

std::array<double, 3> random_barycentric(std::mt19937& rng) {
  std::uniform_real_distribution<double> uni(0.05, 0.9);
  double l1 = uni(rng), l2 = uni(rng);
  while (l1 + l2 > 0.95) {
    l1 = uni(rng);
    l2 = uni(rng);
  }
  return {1.0 - l1 - l2, l1, l2};
}

}  // namespace

TEST_CASE("Lagrange property at the vertices; bubble peaks at the centroid") {
  double v[10];
  for (const ElementFamily& fam :
       {ElementFamily::mini(), ElementFamily::th2(), ElementFamily::th3()}) {
    const std::array<std::array<double, 3>, 3> verts = {
        {{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}}};
    for (int corner = 0; corner < 3; ++corner) {
      eval_velocity_basis(fam, verts[corner], v, nullptr);
      for (int i = 0; i < fam.local_velocity_nodes(); ++i)
        CHECK(v[i] == doctest::Approx(i == corner ? 1.0 : 0.0).epsilon(1e-14));
    }
  }
  eval_velocity_basis(ElementFamily::mini(), {1.0 / 3, 1.0 / 3, 1.0 / 3}, v, nullptr);
  CHECK(v[3] == doctest::Approx(1.0).epsilon(1e-14));  // 27 * (1/3)^3
}

TEST_CASE("Lagrange parts form a partition of unity") {
  std::mt19937 rng(7);
  double v[10];
  for (const ElementFamily& fam :
       {ElementFamily::mini(), ElementFamily::th2(), ElementFamily::th3()}) {
    for (int rep = 0; rep < 10; ++rep) {
      eval_velocity_basis(fam, random_barycentric(rng), v, nullptr);
      double sum = 0.0;
      const int lagrange = fam.has_bubble ? 3 : fam.local_velocity_nodes();
      for (int i = 0; i < lagrange; ++i) sum += v[i];
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-13));
    }
  }
}

TEST_CASE("analytic gradients match central finite differences") {
  std::mt19937 rng(11);
  const double step = 1e-6;
  double vp[10], vm[10], v[10];
  Eigen::Vector2d g[10];
  for (const ElementFamily& fam :
       {ElementFamily::mini(), ElementFamily::th2(), ElementFamily::th3()}) {
    for (int rep = 0; rep < 10; ++rep) {
      const auto l = random_barycentric(rng);
      eval_velocity_basis(fam, l, v, g);
      for (int dir = 0; dir < 2; ++dir) {
        // perturb the reference coordinates (l2, l3)
        auto lp = l, lm = l;
        lp[1 + dir] += step;
        lp[0] -= step;
        lm[1 + dir] -= step;
        lm[0] += step;
        eval_velocity_basis(fam, lp, vp, nullptr);
        eval_velocity_basis(fam, lm, vm, nullptr);
        for (int i = 0; i < fam.local_velocity_nodes(); ++i) {
          const double fd = (vp[i] - vm[i]) / (2.0 * step);
          CHECK(std::abs(fd - g[i][dir]) < 1e-6);
        }
      }
    }
  }
}

TEST_CASE("Mini DOF counts on the unit square") {
  const Mesh m1 = build_mesh(Domain::unit_square(), 1);
  const FeSpace s1 = build_space(m1, ElementFamily::mini());
  CHECK(s1.N() == 34);        // 2 * (9 vertices + 8 bubbles)
  CHECK(s1.N0() == 18);       // 2 * (1 interior vertex + 8 bubbles)
  CHECK(s1.NGamma() == 16);   // 8 boundary vertices
  CHECK(s1.M() == 9);

  const Mesh m0 = build_mesh(Domain::unit_square(), 0);
  const FeSpace s0 = build_space(m0, ElementFamily::mini());
  CHECK(s0.N() == 12);
  CHECK(s0.N0() == 4);
  CHECK(s0.NGamma() == 8);
}

TEST_CASE("N0 + NGamma = N for every family") {
  const Mesh mesh = build_mesh(Domain::l_shape(), 2);
  for (ElementKind kind : {ElementKind::Mini, ElementKind::TH2, ElementKind::TH3}) {
    const FeSpace sp = build_space(mesh, ElementFamily::make(kind));
    CHECK(sp.N0() + sp.NGamma() == sp.N());
    CHECK(sp.NGamma() == 2 * static_cast<int>(mesh.boundary_edges.size()) *
                             sp.family.velocity_degree);
  }
}

TEST_CASE("boundary DOFs are nonzero on the boundary, interior DOFs vanish") {
  const Mesh mesh = build_mesh(Domain::unit_square(), 2);
  for (ElementKind kind : {ElementKind::Mini, ElementKind::TH2, ElementKind::TH3}) {
    const FeSpace sp = build_space(mesh, ElementFamily::make(kind));
    // interpolate a field that is 1 everywhere: all boundary samples of any
    // interior basis function must leave the boundary values untouched
    for (int n = 0; n < sp.n_scalar; ++n) {
      const bool boundary_rank = sp.node_rank[n] >= sp.n_interior_scalar;
      // a scalar node is on the boundary iff its coordinates are
      const Eigen::Vector2d& x = sp.node_coords[n];
      const bool on_gamma = x.x() == 0.0 || x.x() == 1.0 || x.y() == 0.0 || x.y() == 1.0;
      if (sp.node_is_bubble[n] || sp.family.kind == ElementKind::TH3) {
        // cell nodes sit at centroids and are always interior
        if (sp.node_is_bubble[n]) CHECK_FALSE(boundary_rank);
      }
      if (!sp.node_is_bubble[n] && sp.family.kind != ElementKind::TH3)
        CHECK(boundary_rank == on_gamma);
      if (boundary_rank) CHECK(on_gamma);
    }
  }
}

TEST_CASE("trace ordering walks the boundary counterclockwise from the first corner") {
  const Mesh mesh = build_mesh(Domain::unit_square(), 2);
  const FeSpace sp = build_space(mesh, ElementFamily::th2());
  REQUIRE(sp.trace_nodes.size() == static_cast<std::size_t>(sp.n_boundary_scalar));
  CHECK((sp.node_coords[sp.trace_nodes[0]] - Eigen::Vector2d(0, 0)).norm() == 0.0);
  for (int i = 0; i + 1 < sp.n_boundary_scalar; ++i)
    CHECK(sp.trace_arclength[i] < sp.trace_arclength[i + 1]);
  // arc spacing is h_edge / degree
  CHECK(sp.trace_arclength[1] ==
        doctest::Approx(mesh.cell_size() / sp.family.velocity_degree));
}

TEST_CASE("nodal interpolation reproduces polynomial fields") {
  const Mesh mesh = build_mesh(Domain::unit_square(), 2);
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> uni(0.05, 0.95);
  for (ElementKind kind : {ElementKind::Mini, ElementKind::TH2, ElementKind::TH3}) {
    const FeSpace sp = build_space(mesh, ElementFamily::make(kind));
    const int d = sp.family.velocity_degree;
    const VelocityField f = [d](const Eigen::Vector2d& x) {
      return Eigen::Vector2d(std::pow(x.x(), d) + x.y(), x.x() - std::pow(x.y(), d));
    };
    const Eigen::VectorXd coeffs = interpolate_velocity(sp, f);
    for (int rep = 0; rep < 20; ++rep) {
      const Eigen::Vector2d p(uni(rng), uni(rng));
      const Eigen::Vector2d err = evaluate_velocity(sp, coeffs, p) - f(p);
      CHECK(err.norm() < 1e-12);
    }
  }
}
