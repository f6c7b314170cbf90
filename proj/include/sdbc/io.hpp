#pragma once

#include "sdbc/fem.hpp"

#include <string>

namespace sdbc {

/// Legacy ASCII VTK (POINTS/CELLS, cell type 5) of the triangulation alone.
void write_mesh_vtk(const Mesh& mesh, const std::string& path);

/// Mesh plus vertex point data: velocity as VECTORS, and, when `pressure`
/// has length M, the pressure as SCALARS (evaluated at vertices).
void write_fields_vtk(const FeSpace& space, const Eigen::VectorXd& velocity,
                      const Eigen::VectorXd& pressure, const std::string& path);

/// Boundary control as CSV rows (s, u1, u2), traversing Gamma
/// counterclockwise from the first corner.
void write_control_csv(const FeSpace& space, const Eigen::VectorXd& trace,
                       const std::string& path);

/// Shortest round-trippable decimal form of a double ("nan" never appears in
/// data files; callers map undefined entries to empty fields).
std::string format_double(double v);

}  // namespace sdbc
