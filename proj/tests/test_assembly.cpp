#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sdbc/assembly.hpp"
#include "sdbc/quadrature.hpp"

#include <Eigen/Dense>
#include <cmath>

using namespace sdbc;

namespace {

Eigen::VectorXd constant_field(const FeSpace& sp, double vx, double vy) {
  return interpolate_velocity(sp, [&](const Eigen::Vector2d&) {
    return Eigen::Vector2d(vx, vy);
  });
}

// trace vector picking out the outward normal, per edge; corner nodes get
// the average of the two adjacent edge normals
Eigen::VectorXd normal_trace(const FeSpace& sp) {
  const Mesh& mesh = *sp.mesh;
  const int nb = sp.n_boundary_scalar;
  const int deg = sp.family.velocity_degree;
  Eigen::VectorXd u = Eigen::VectorXd::Zero(sp.NGamma());
  Eigen::VectorXd mult = Eigen::VectorXd::Zero(nb);
  for (std::size_t e = 0; e < mesh.boundary_edges.size(); ++e) {
    const Eigen::Vector2d n = mesh.boundary_edges[e].normal;
    for (int j = 0; j <= deg; ++j) {
      const int pos = (static_cast<int>(e) * deg + j) % nb;
      u[2 * pos] += n.x();
      u[2 * pos + 1] += n.y();
      mult[pos] += 1.0;
    }
  }
  for (int i = 0; i < nb; ++i) {
    u[2 * i] /= mult[i];
    u[2 * i + 1] /= mult[i];
  }
  return u;
}

}  // namespace

TEST_CASE("mass of a constant field is the domain area") {
  for (const Domain& dom : {Domain::unit_square(), Domain::l_shape()}) {
    const Mesh mesh = build_mesh(dom, 2);
    for (ElementKind kind : {ElementKind::Mini, ElementKind::TH2}) {
      const FeSpace sp = build_space(mesh, ElementFamily::make(kind));
      const AssembledSystem sys = assemble(sp);
      const Eigen::VectorXd u = constant_field(sp, 1.0, 0.0);
      CHECK(u.dot(sys.M * u) == doctest::Approx(dom.area()).epsilon(1e-12));
      CHECK((sys.K * u).norm() < 1e-12);
    }
  }
}

TEST_CASE("M and K are symmetric, M positive definite on random vectors") {
  const Mesh mesh = build_mesh(Domain::unit_square(), 2);
  const FeSpace sp = build_space(mesh, ElementFamily::mini());
  const AssembledSystem sys = assemble(sp);
  const Eigen::MatrixXd M = Eigen::MatrixXd(sys.M);
  const Eigen::MatrixXd K = Eigen::MatrixXd(sys.K);
  CHECK((M - M.transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((K - K.transpose()).cwiseAbs().maxCoeff() == 0.0);
  srand(42);
  for (int rep = 0; rep < 5; ++rep) {
    const Eigen::VectorXd x = Eigen::VectorXd::Random(sys.N());
    CHECK(x.dot(M * x) > 0.0);
    CHECK(x.dot(K * x) >= 0.0);
  }
}

TEST_CASE("divergence matrix annihilates an exactly representable solenoidal field") {
  const Mesh mesh = build_mesh(Domain::unit_square(), 2);
  const FeSpace sp = build_space(mesh, ElementFamily::th2());
  const AssembledSystem sys = assemble(sp);
  const Eigen::VectorXd y = interpolate_velocity(
      sp, [](const Eigen::Vector2d& x) { return Eigen::Vector2d(x.x(), -x.y()); });
  CHECK((sys.B * y).norm() < 1e-12);
}

TEST_CASE("net-flux functional") {
  const Mesh mesh = build_mesh(Domain::unit_square(), 3);
  const FeSpace sp = build_space(mesh, ElementFamily::mini());
  const AssembledSystem sys = assemble(sp);

  SUBCASE("outward normal trace has positive outflow") {
    const Eigen::VectorXd u = normal_trace(sp);
    CHECK(u.dot(sys.c) > 0.5);
  }

  SUBCASE("tangential field on one straight segment contributes nothing") {
    // segment 0 of the square is y = 0 with normal (0,-1); tangent (1,0)
    double contribution = 0.0;
    for (int i = 0; i < sp.n_boundary_scalar; ++i) {
      const Eigen::Vector2d& x = sp.node_coords[sp.trace_nodes[i]];
      if (x.y() == 0.0 && x.x() > 0.0 && x.x() < 1.0) contribution += sys.c[2 * i];
    }
    CHECK(std::abs(contribution) < 1e-13);
  }

  SUBCASE("rigid translation around the closed boundary has zero net flux") {
    for (const Domain& dom : {Domain::unit_square(), Domain::l_shape()}) {
      const Mesh m = build_mesh(dom, 2);
      for (ElementKind kind : {ElementKind::Mini, ElementKind::TH2, ElementKind::TH3}) {
        const FeSpace s = build_space(m, ElementFamily::make(kind));
        const AssembledSystem a = assemble(s);
        Eigen::VectorXd u = Eigen::VectorXd::Zero(s.NGamma());
        for (int i = 0; i < s.n_boundary_scalar; ++i) u[2 * i] = 1.0;
        CHECK(std::abs(u.dot(a.c)) < 1e-12);
        u.setZero();
        for (int i = 0; i < s.n_boundary_scalar; ++i) u[2 * i + 1] = 1.0;
        CHECK(std::abs(u.dot(a.c)) < 1e-12);
      }
    }
  }
}

TEST_CASE("sub-blocks tile the parent matrices exactly") {
  const Mesh mesh = build_mesh(Domain::unit_square(), 2);
  const FeSpace sp = build_space(mesh, ElementFamily::mini());
  const AssembledSystem sys = assemble(sp);
  const int N0 = sys.N0(), NG = sys.NGamma();

  Eigen::MatrixXd K = Eigen::MatrixXd(sys.K);
  Eigen::MatrixXd tiled(K.rows(), K.cols());
  tiled.topLeftCorner(N0, N0) = Eigen::MatrixXd(sys.K00);
  tiled.bottomLeftCorner(NG, N0) = Eigen::MatrixXd(sys.KGamma0);
  tiled.topRightCorner(N0, NG) = Eigen::MatrixXd(sys.KGamma0).transpose();
  tiled.bottomRightCorner(NG, NG) = Eigen::MatrixXd(sys.KGammaGamma);
  CHECK((K - tiled).cwiseAbs().maxCoeff() == 0.0);

  // KGamma stacks the boundary rows of K
  Eigen::MatrixXd KGamma = Eigen::MatrixXd(sys.KGamma);
  CHECK((KGamma - K.bottomRows(NG)).cwiseAbs().maxCoeff() == 0.0);

  // Btilde drops exactly the pinned (last) pressure row
  CHECK(sys.pinned_pressure == sys.Mp() - 1);
  Eigen::MatrixXd B = Eigen::MatrixXd(sys.B);
  CHECK((Eigen::MatrixXd(sys.Btilde) - B.topRows(sys.Mp() - 1)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("boundary mass agrees with arc-length integration of traces") {
  const Mesh mesh = build_mesh(Domain::unit_square(), 2);
  const FeSpace sp = build_space(mesh, ElementFamily::mini());
  const AssembledSystem sys = assemble(sp);
  // constant trace (1,0): S-quadratic form equals the perimeter
  Eigen::VectorXd u = Eigen::VectorXd::Zero(sp.NGamma());
  for (int i = 0; i < sp.n_boundary_scalar; ++i) u[2 * i] = 1.0;
  CHECK(u.dot(sys.SGammaGamma * u) == doctest::Approx(4.0).epsilon(1e-13));
}

TEST_CASE("discrete inf-sup constant stays bounded under refinement") {
  // beta_h^2 = lambda_min( Btilde0 (K00)^-1 Btilde0^T, Mp ); monitored only
  std::vector<double> beta;
  for (int level : {2, 3, 4}) {
    const Mesh mesh = build_mesh(Domain::unit_square(), level);
    const FeSpace sp = build_space(mesh, ElementFamily::mini());
    const AssembledSystem sys = assemble(sp);

    // test-side pressure mass matrix
    const int M = sys.Mp();
    Eigen::MatrixXd Mp = Eigen::MatrixXd::Zero(M, M);
    const TriangleQuadrature quad = triangle_quadrature(4);
    for (int t = 0; t < mesh.n_triangles(); ++t) {
      const double detJ = 2.0 * mesh.triangle_area(t);
      for (int q = 0; q < quad.npoints(); ++q) {
        double pv[6];
        eval_pressure_basis(sp.family, quad.points[q], pv);
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j)
            Mp(sp.cell_pressure_nodes[t][i], sp.cell_pressure_nodes[t][j]) +=
                quad.weights[q] * detJ * pv[i] * pv[j];
      }
    }

    // unpinned divergence block: the constant pressure is an exact kernel
    // vector, so the inf-sup constant is the smallest nonzero eigenvalue
    const Eigen::MatrixXd K00 = Eigen::MatrixXd(sys.K00);
    const Eigen::MatrixXd B0 = Eigen::MatrixXd(sys.B).leftCols(sys.N0());
    const Eigen::MatrixXd S = B0 * K00.ldlt().solve(B0.transpose());
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(S, Mp);
    CHECK(std::abs(es.eigenvalues()(0)) < 1e-10);
    beta.push_back(std::sqrt(es.eigenvalues()(1)));
  }
  CHECK(beta[0] > 0.0);
  CHECK(beta[1] > 0.7 * beta[0]);
  CHECK(beta[2] > 0.7 * beta[0]);
}
