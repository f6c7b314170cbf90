#include "sdbc/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

namespace sdbc {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}

void write_vtk_header(std::ostream& out, const Mesh& mesh) {
  out << "# vtk DataFile Version 3.0\n";
  out << "sdbc mesh level " << mesh.level << "\n";
  out << "ASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.n_vertices() << " double\n";
  for (const auto& v : mesh.vertices)
    out << format_double(v.x()) << " " << format_double(v.y()) << " 0\n";
  const int T = mesh.n_triangles();
  out << "CELLS " << T << " " << 4 * T << "\n";
  for (const auto& t : mesh.triangles) out << "3 " << t[0] << " " << t[1] << " " << t[2] << "\n";
  out << "CELL_TYPES " << T << "\n";
  for (int i = 0; i < T; ++i) out << "5\n";
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

void write_mesh_vtk(const Mesh& mesh, const std::string& path) {
  auto out = open_out(path);
  write_vtk_header(out, mesh);
}

void write_fields_vtk(const FeSpace& space, const Eigen::VectorXd& velocity,
                      const Eigen::VectorXd& pressure, const std::string& path) {
  const Mesh& mesh = *space.mesh;
  auto out = open_out(path);
  write_vtk_header(out, mesh);
  out << "POINT_DATA " << mesh.n_vertices() << "\n";
  out << "VECTORS velocity double\n";
  for (int v = 0; v < mesh.n_vertices(); ++v) {
    out << format_double(velocity[space.dof(v, 0)]) << " "
        << format_double(velocity[space.dof(v, 1)]) << " 0\n";
  }
  if (pressure.size() == space.M()) {
    out << "SCALARS pressure double 1\nLOOKUP_TABLE default\n";
    // pressure DOFs at vertices come first in the pressure numbering
    for (int v = 0; v < mesh.n_vertices(); ++v) out << format_double(pressure[v]) << "\n";
  }
}

void write_control_csv(const FeSpace& space, const Eigen::VectorXd& trace,
                       const std::string& path) {
  auto out = open_out(path);
  out << "s,u1,u2\n";
  for (int i = 0; i < space.n_boundary_scalar; ++i) {
    out << format_double(space.trace_arclength[i]) << "," << format_double(trace[2 * i]) << ","
        << format_double(trace[2 * i + 1]) << "\n";
  }
}

}  // namespace sdbc
