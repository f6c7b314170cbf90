#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sdbc/quadrature.hpp"
#include "sdbc/stokes.hpp"

#include <cmath>
#include <random>

using namespace sdbc;

namespace {

struct Setup {
  Mesh mesh;
  FeSpace space;
  AssembledSystem sys;

  Setup(const Domain& dom, int level, ElementKind kind, int pin = -1) {
    mesh = build_mesh(dom, level);
    space = build_space(mesh, ElementFamily::make(kind));
    sys = assemble(space, pin);
  }
};

// L2(Gamma) distance between a trace coefficient vector and a continuous field
double trace_error(const FeSpace& sp, const Eigen::VectorXd& u, const VelocityField& f) {
  const Mesh& mesh = *sp.mesh;
  const int deg = sp.family.velocity_degree;
  const int nb = sp.n_boundary_scalar;
  const double ell = sp.boundary_edge_length();
  const EdgeQuadrature eq = edge_quadrature(sp.family.edge_quadrature_points() + 2);
  std::vector<double> L(deg + 1);
  double err2 = 0.0;
  for (std::size_t e = 0; e < mesh.boundary_edges.size(); ++e) {
    const Eigen::Vector2d a = mesh.vertices[mesh.boundary_edges[e].a];
    const Eigen::Vector2d b = mesh.vertices[mesh.boundary_edges[e].b];
    for (int q = 0; q < eq.npoints(); ++q) {
      eval_line_lagrange(deg, eq.points[q], L.data());
      Eigen::Vector2d uh = Eigen::Vector2d::Zero();
      for (int j = 0; j <= deg; ++j) {
        const int pos = (static_cast<int>(e) * deg + j) % nb;
        uh.x() += L[j] * u[2 * pos];
        uh.y() += L[j] * u[2 * pos + 1];
      }
      err2 += ell * eq.weights[q] * (uh - f(a + eq.points[q] * (b - a))).squaredNorm();
    }
  }
  return std::sqrt(err2);
}

const VelocityField kLinearField = [](const Eigen::Vector2d& x) {
  return Eigen::Vector2d(x.x(), -x.y());
};

}  // namespace

TEST_CASE("exactly representable Stokes solution is reproduced") {
  for (ElementKind kind : {ElementKind::Mini, ElementKind::TH2}) {
    const Setup s(Domain::unit_square(), 2, kind);
    const SaddleSolver solver(s.sys);
    const Eigen::VectorXd exact = interpolate_velocity(s.space, kLinearField);
    const Eigen::VectorXd trace = exact.tail(s.space.NGamma());
    const StokesSolution sol = solve_dirichlet(solver, trace);
    CHECK((sol.velocity - exact).norm() < 1e-10 * exact.norm());
    CHECK(sol.pressure.norm() < 1e-10);
    CHECK(sol.residual_momentum < 1e-10);
    CHECK(sol.residual_divergence < 1e-10);
  }
}

TEST_CASE("homogeneous problem returns zero") {
  const Setup s(Domain::unit_square(), 2, ElementKind::Mini);
  const SaddleSolver solver(s.sys);
  const StokesSolution sol = solve_dirichlet(solver, Eigen::VectorXd::Zero(s.space.NGamma()));
  CHECK(sol.velocity.norm() == 0.0);
  CHECK(sol.pressure.norm() == 0.0);
}

TEST_CASE("volume sources in a no-slip box") {
  const Setup s(Domain::unit_square(), 4, ElementKind::Mini);
  const SaddleSolver solver(s.sys);
  const Eigen::VectorXd zero_trace = Eigen::VectorXd::Zero(s.space.NGamma());

  SUBCASE("a conservative force is absorbed by the pressure") {
    // f = (1,1) = grad(x1 + x2): velocity stays zero, pressure picks up the
    // potential (x1 + x2 lies in the P1 pressure space, so this is exact)
    const Eigen::VectorXd load = interior_load(
        s.space, [](const Eigen::Vector2d&) { return Eigen::Vector2d(1.0, 1.0); });
    const StokesSolution sol = solve_dirichlet(solver, zero_trace, &load);
    const double l2 = std::sqrt(sol.velocity.dot(s.sys.M * sol.velocity));
    CHECK(l2 < 1e-12);
    // pinned potential: x1 + x2 minus its value at the pinned vertex
    const Eigen::Vector2d pin = s.mesh.vertices[s.sys.pinned_pressure];
    Eigen::VectorXd expected(s.sys.Mp() - 1);
    for (int v = 0; v < s.sys.Mp() - 1; ++v)
      expected[v] = s.mesh.vertices[v].sum() - pin.sum();
    CHECK((sol.pressure - expected).norm() < 1e-10 * expected.norm());
  }

  SUBCASE("a rotational force drives a nonzero divergence-free flow") {
    const Eigen::VectorXd load = interior_load(
        s.space, [](const Eigen::Vector2d& x) { return Eigen::Vector2d(-x.y(), x.x()); });
    const StokesSolution sol = solve_dirichlet(solver, zero_trace, &load);
    const double l2 = std::sqrt(sol.velocity.dot(s.sys.M * sol.velocity));
    CHECK(l2 > 1e-4);
    CHECK((s.sys.Btilde0 * sol.velocity.head(s.space.N0())).norm() < 1e-10);
    // regression anchor recorded from this discretization (level 4, Mini)
    CHECK(l2 == doctest::Approx(0.0050404077895316078).epsilon(1e-7));
  }
}

TEST_CASE("homogeneous-Dirichlet solve is self-adjoint") {
  const Setup s(Domain::unit_square(), 3, ElementKind::Mini);
  const SaddleSolver solver(s.sys);
  std::mt19937 rng(5);
  std::normal_distribution<double> gauss;
  for (int rep = 0; rep < 5; ++rep) {
    Eigen::VectorXd g1(s.space.N()), g2(s.space.N());
    for (int i = 0; i < s.space.N(); ++i) {
      g1[i] = gauss(rng);
      g2[i] = gauss(rng);
    }
    const auto [z1, q1] = solve_adjoint(solver, g1);
    const auto [z2, q2] = solve_adjoint(solver, g2);
    const double a = (s.sys.M0 * g2).dot(z1);
    const double b = (s.sys.M0 * g1).dot(z2);
    CHECK(std::abs(a - b) < 1e-10 * (std::abs(a) + 1.0));
    CHECK((s.sys.Btilde0 * z1).norm() < 1e-10);
    CHECK(std::isfinite(q1.norm()));
  }
  const auto [z0, q0] = solve_adjoint(solver, Eigen::VectorXd::Zero(s.space.N()));
  CHECK(z0.norm() == 0.0);
  CHECK(q0.norm() == 0.0);
}

TEST_CASE("boundary projection") {
  const Setup s(Domain::unit_square(), 3, ElementKind::Mini);

  SUBCASE("members of the control space are fixed points") {
    const Eigen::VectorXd exact = interpolate_velocity(s.space, kLinearField);
    const Eigen::VectorXd trace = exact.tail(s.space.NGamma());
    REQUIRE(std::abs(trace.dot(s.sys.c)) < 1e-12);
    const Eigen::VectorXd proj = project_boundary(s.sys, kLinearField);
    CHECK((proj - trace).norm() < 1e-12 * (1.0 + trace.norm()));
  }

  SUBCASE("projection enforces the net-flux constraint") {
    // outward normal data: per-edge constant, maximal net flux
    const Eigen::VectorXd proj = project_boundary(s.sys, [](const Eigen::Vector2d& x) {
      Eigen::Vector2d n(0.0, 0.0);
      if (x.x() == 0.0) n += Eigen::Vector2d(-1, 0);
      if (x.x() == 1.0) n += Eigen::Vector2d(1, 0);
      if (x.y() == 0.0) n += Eigen::Vector2d(0, -1);
      if (x.y() == 1.0) n += Eigen::Vector2d(0, 1);
      return n;
    });
    CHECK(std::abs(proj.dot(s.sys.c)) < 1e-12);
  }

  SUBCASE("second-order convergence for a smooth compatible field") {
    const VelocityField curl = [](const Eigen::Vector2d& x) {
      const double pi = M_PI;
      return Eigen::Vector2d(pi * std::sin(pi * x.x()) * std::cos(pi * x.y()),
                             -pi * std::cos(pi * x.x()) * std::sin(pi * x.y()));
    };
    std::vector<double> errs;
    for (int level : {2, 3, 4, 5}) {
      const Setup sl(Domain::unit_square(), level, ElementKind::Mini);
      errs.push_back(trace_error(sl.space, project_boundary(sl.sys, curl), curl));
    }
    for (std::size_t i = 1; i < errs.size(); ++i)
      CHECK(std::log2(errs[i - 1] / errs[i]) > 1.9);
  }
}

TEST_CASE("pin choice changes the pressure only by a constant") {
  const Setup a(Domain::unit_square(), 3, ElementKind::Mini);
  const Setup b(Domain::unit_square(), 3, ElementKind::Mini, 0);
  const SaddleSolver sa(a.sys), sb(b.sys);

  const Eigen::VectorXd u = project_boundary(a.sys, kLinearField);
  const StokesSolution xa = solve_dirichlet(sa, u);
  const StokesSolution xb = solve_dirichlet(sb, u);
  CHECK((xa.velocity - xb.velocity).norm() < 1e-10 * (1.0 + xa.velocity.norm()));

  // expand both pinned representatives and compare up to a constant
  auto expand = [](const AssembledSystem& sys, const Eigen::VectorXd& p) {
    Eigen::VectorXd full(sys.Mp());
    int j = 0;
    for (int i = 0; i < sys.Mp(); ++i) full[i] = i == sys.pinned_pressure ? 0.0 : p[j++];
    return full;
  };
  const Eigen::VectorXd pa = expand(a.sys, xa.pressure);
  const Eigen::VectorXd pb = expand(b.sys, xb.pressure);
  const Eigen::VectorXd diff = pa - pb;
  CHECK((diff.array() - diff[0]).abs().maxCoeff() < 1e-9);
}
