#include "sdbc/assembly.hpp"

#include "sdbc/quadrature.hpp"

#include <fstream>
#include <stdexcept>
#include <vector>

namespace sdbc {

namespace {

using Triplet = Eigen::Triplet<double>;

SpMat sub_block(const SpMat& A, int r0, int nr, int c0, int nc) {
  std::vector<Triplet> trip;
  for (int col = c0; col < c0 + nc; ++col) {
    for (SpMat::InnerIterator it(A, col); it; ++it) {
      if (it.row() >= r0 && it.row() < r0 + nr) trip.emplace_back(it.row() - r0, col - c0, it.value());
    }
  }
  SpMat out(nr, nc);
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

SpMat drop_row(const SpMat& A, int row) {
  std::vector<Triplet> trip;
  trip.reserve(A.nonZeros());
  for (int col = 0; col < A.cols(); ++col) {
    for (SpMat::InnerIterator it(A, col); it; ++it) {
      if (it.row() == row) continue;
      trip.emplace_back(it.row() - (it.row() > row ? 1 : 0), col, it.value());
    }
  }
  SpMat out(A.rows() - 1, A.cols());
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

}  // namespace

AssembledSystem assemble(const FeSpace& sp, int pinned_pressure) {
  AssembledSystem sys;
  sys.space = &sp;
  const Mesh& mesh = *sp.mesh;
  const ElementFamily& fam = sp.family;
  const int nv = fam.local_velocity_nodes();
  const int np = fam.local_pressure_nodes();
  const int N = sp.N();
  const int N0 = sp.N0();
  const int NG = sp.NGamma();
  const int M = sp.M();

  sys.pinned_pressure = pinned_pressure < 0 ? M - 1 : pinned_pressure;
  if (sys.pinned_pressure >= M) throw std::invalid_argument("assemble: pinned pressure out of range");

  const TriangleQuadrature quad = triangle_quadrature(fam.volume_quadrature_degree());
  const int nq = quad.npoints();

  // Reference basis tables, one row per quadrature point.
  std::vector<std::array<double, 10>> vval(nq);
  std::vector<std::array<Eigen::Vector2d, 10>> vgrad(nq);
  std::vector<std::array<double, 6>> pval(nq);
  for (int q = 0; q < nq; ++q) {
    eval_velocity_basis(fam, quad.points[q], vval[q].data(), vgrad[q].data());
    eval_pressure_basis(fam, quad.points[q], pval[q].data());
  }

  std::vector<Triplet> tm, tk, tb;
  tm.reserve(2 * nv * nv * mesh.n_triangles());
  tk.reserve(2 * nv * nv * mesh.n_triangles());
  tb.reserve(2 * np * nv * mesh.n_triangles());
  sys.pressure_integral = Eigen::VectorXd::Zero(M);

  Eigen::MatrixXd Ke(nv, nv), Me(nv, nv);
  Eigen::MatrixXd Be0(np, nv), Be1(np, nv);
  std::array<Eigen::Vector2d, 10> gphys;

  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    const Eigen::Vector2d p0 = mesh.vertices[tri[0]];
    Eigen::Matrix2d J;
    J.col(0) = mesh.vertices[tri[1]] - p0;
    J.col(1) = mesh.vertices[tri[2]] - p0;
    const double detJ = J.determinant();
    const Eigen::Matrix2d JinvT = J.inverse().transpose();

    Ke.setZero();
    Me.setZero();
    Be0.setZero();
    Be1.setZero();
    for (int q = 0; q < nq; ++q) {
      const double w = quad.weights[q] * detJ;
      for (int i = 0; i < nv; ++i) gphys[i] = JinvT * vgrad[q][i];
      for (int i = 0; i < nv; ++i) {
        for (int j = 0; j < nv; ++j) {
          Ke(i, j) += w * gphys[i].dot(gphys[j]);
          Me(i, j) += w * (vval[q][i] * vval[q][j]);
        }
      }
      for (int p = 0; p < np; ++p) {
        for (int j = 0; j < nv; ++j) {
          Be0(p, j) -= w * pval[q][p] * gphys[j].x();
          Be1(p, j) -= w * pval[q][p] * gphys[j].y();
        }
      }
      for (int p = 0; p < np; ++p)
        sys.pressure_integral[sp.cell_pressure_nodes[t][p]] += w * pval[q][p];
    }

    for (int i = 0; i < nv; ++i) {
      const int gi = sp.cell_velocity_nodes[t][i];
      for (int j = 0; j < nv; ++j) {
        const int gj = sp.cell_velocity_nodes[t][j];
        for (int comp = 0; comp < 2; ++comp) {
          tk.emplace_back(sp.dof(gi, comp), sp.dof(gj, comp), Ke(i, j));
          tm.emplace_back(sp.dof(gi, comp), sp.dof(gj, comp), Me(i, j));
        }
      }
    }
    for (int p = 0; p < np; ++p) {
      const int gp = sp.cell_pressure_nodes[t][p];
      for (int j = 0; j < nv; ++j) {
        const int gj = sp.cell_velocity_nodes[t][j];
        tb.emplace_back(gp, sp.dof(gj, 0), Be0(p, j));
        tb.emplace_back(gp, sp.dof(gj, 1), Be1(p, j));
      }
    }
  }

  sys.K.resize(N, N);
  sys.K.setFromTriplets(tk.begin(), tk.end());
  sys.M.resize(N, N);
  sys.M.setFromTriplets(tm.begin(), tm.end());
  sys.B.resize(M, N);
  sys.B.setFromTriplets(tb.begin(), tb.end());

  // Boundary mass and net-flux functional. Every boundary edge carries the
  // same reference trace basis on equally spaced nodes, so the local edge
  // matrices are computed once. Corner nodes pick up contributions from
  // both adjacent edges, each with its own outward normal.
  const int deg = fam.velocity_degree;
  const int en = deg + 1;
  const EdgeQuadrature eq = edge_quadrature(fam.edge_quadrature_points());
  Eigen::MatrixXd Sref = Eigen::MatrixXd::Zero(en, en);
  Eigen::VectorXd Iref = Eigen::VectorXd::Zero(en);
  std::vector<double> L(en);
  for (int q = 0; q < eq.npoints(); ++q) {
    eval_line_lagrange(deg, eq.points[q], L.data());
    for (int i = 0; i < en; ++i) {
      Iref[i] += eq.weights[q] * L[i];
      for (int j = 0; j < en; ++j) Sref(i, j) += eq.weights[q] * L[i] * L[j];
    }
  }

  const double ell = sp.boundary_edge_length();
  const int nb = sp.n_boundary_scalar;
  sys.c = Eigen::VectorXd::Zero(NG);
  std::vector<Triplet> ts;
  for (std::size_t e = 0; e < mesh.boundary_edges.size(); ++e) {
    const Eigen::Vector2d n = mesh.boundary_edges[e].normal;
    for (int i = 0; i <= deg; ++i) {
      const int pi = (static_cast<int>(e) * deg + i) % nb;
      for (int comp = 0; comp < 2; ++comp) sys.c[2 * pi + comp] += n[comp] * ell * Iref[i];
      for (int j = 0; j <= deg; ++j) {
        const int pj = (static_cast<int>(e) * deg + j) % nb;
        for (int comp = 0; comp < 2; ++comp)
          ts.emplace_back(2 * pi + comp, 2 * pj + comp, ell * Sref(i, j));
      }
    }
  }
  sys.SGammaGamma.resize(NG, NG);
  sys.SGammaGamma.setFromTriplets(ts.begin(), ts.end());

  // Sub-blocks; the interior-first ordering makes them contiguous slices.
  sys.M00 = sub_block(sys.M, 0, N0, 0, N0);
  sys.M0 = sub_block(sys.M, 0, N0, 0, N);
  sys.MGamma0 = sub_block(sys.M, N0, NG, 0, N0);
  sys.MGammaGamma = sub_block(sys.M, N0, NG, N0, NG);
  sys.MGamma = sub_block(sys.M, N0, NG, 0, N);
  sys.K00 = sub_block(sys.K, 0, N0, 0, N0);
  sys.KGamma0 = sub_block(sys.K, N0, NG, 0, N0);
  sys.KGammaGamma = sub_block(sys.K, N0, NG, N0, NG);
  sys.KGamma = sub_block(sys.K, N0, NG, 0, N);

  sys.Btilde = drop_row(sys.B, sys.pinned_pressure);
  sys.Btilde0 = sub_block(sys.Btilde, 0, M - 1, 0, N0);
  sys.BtildeGamma = sub_block(sys.Btilde, 0, M - 1, N0, NG);

  return sys;
}

Eigen::VectorXd interior_load(const FeSpace& sp, const VelocityField& f) {
  const Mesh& mesh = *sp.mesh;
  const ElementFamily& fam = sp.family;
  const int nv = fam.local_velocity_nodes();
  const TriangleQuadrature quad = triangle_quadrature(fam.volume_quadrature_degree());

  Eigen::VectorXd load = Eigen::VectorXd::Zero(sp.N());
  std::array<double, 10> v;
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    const Eigen::Vector2d p0 = mesh.vertices[tri[0]];
    Eigen::Matrix2d J;
    J.col(0) = mesh.vertices[tri[1]] - p0;
    J.col(1) = mesh.vertices[tri[2]] - p0;
    const double detJ = J.determinant();
    for (int q = 0; q < quad.npoints(); ++q) {
      const auto& l = quad.points[q];
      eval_velocity_basis(fam, l, v.data(), nullptr);
      const Eigen::Vector2d x = l[0] * mesh.vertices[tri[0]] + l[1] * mesh.vertices[tri[1]] +
                                l[2] * mesh.vertices[tri[2]];
      const Eigen::Vector2d fx = f(x);
      const double w = quad.weights[q] * detJ;
      for (int i = 0; i < nv; ++i) {
        const int gi = sp.cell_velocity_nodes[t][i];
        load[sp.dof(gi, 0)] += w * v[i] * fx.x();
        load[sp.dof(gi, 1)] += w * v[i] * fx.y();
      }
    }
  }
  return load.head(sp.N0());
}

void write_matrix_market(const SpMat& A, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << A.rows() << " " << A.cols() << " " << A.nonZeros() << "\n";
  out.precision(17);
  for (int col = 0; col < A.cols(); ++col)
    for (SpMat::InnerIterator it(A, col); it; ++it)
      out << it.row() + 1 << " " << col + 1 << " " << it.value() << "\n";
}

}  // namespace sdbc
