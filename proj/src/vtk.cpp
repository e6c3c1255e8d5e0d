#include "stokesfem/vtk.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace stokesfem {

namespace {

void write_header_and_grid(std::ofstream& out, const Mesh& mesh, const std::string& title) {
  char buf[128];
  out << "# vtk DataFile Version 2.0\n";
  out << title << " (diagonal: " << Mesh::diagonal_convention() << ")\n";
  out << "ASCII\n";
  out << "DATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.num_vertices() << " double\n";
  for (const auto& v : mesh.vertices) {
    std::snprintf(buf, sizeof(buf), "%.12g %.12g 0\n", v.x(), v.y());
    out << buf;
  }
  out << "CELLS " << mesh.num_cells() << " " << 4 * mesh.num_cells() << "\n";
  for (const auto& c : mesh.cells) out << "3 " << c[0] << " " << c[1] << " " << c[2] << "\n";
  out << "CELL_TYPES " << mesh.num_cells() << "\n";
  for (int c = 0; c < mesh.num_cells(); ++c) out << "5\n";
}

}  // namespace

void write_vtk_mesh(const Mesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_vtk_mesh: cannot open " + path);
  write_header_and_grid(out, mesh, "stokesfem mesh");
  out << "CELL_DATA " << mesh.num_cells() << "\n";
  out << "SCALARS diameter double 1\nLOOKUP_TABLE default\n";
  char buf[64];
  for (double h : mesh.cell_diameter) {
    std::snprintf(buf, sizeof(buf), "%.12g\n", h);
    out << buf;
  }
}

void write_vtk_solution(const StokesSolution& solution, const std::string& path) {
  const Mesh& mesh = *solution.mesh;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_vtk_solution: cannot open " + path);
  write_header_and_grid(out, mesh, "stokesfem solution");

  const VelocitySpace velocity(mesh, solution.config);
  const PressureSpace pressure(mesh, solution.config.l);
  const QuadratureRule rule = triangle_rule(8);

  out << "CELL_DATA " << mesh.num_cells() << "\n";
  char buf[160];
  out << "VECTORS velocity double\n";
  std::vector<double> pavg(mesh.num_cells()), divmax(mesh.num_cells());
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const MappedRule vol = map_to_cell(rule, mesh, c);
    Eigen::MatrixX2d uh;
    velocity.field_values(c, solution.velocity, vol.points, uh);
    const double area = mesh.cell_area[c];
    const Eigen::Vector2d avg(vol.weights.dot(uh.col(0)) / area,
                              vol.weights.dot(uh.col(1)) / area);
    const Eigen::VectorXd ph = pressure.field_values(c, solution.pressure, vol.points);
    pavg[c] = vol.weights.dot(ph) / area;
    divmax[c] =
        velocity.field_divergence(c, solution.velocity, vol.points).cwiseAbs().maxCoeff();
    std::snprintf(buf, sizeof(buf), "%.12g %.12g 0\n", avg.x(), avg.y());
    out << buf;
  }
  out << "SCALARS pressure double 1\nLOOKUP_TABLE default\n";
  for (double p : pavg) {
    std::snprintf(buf, sizeof(buf), "%.12g\n", p);
    out << buf;
  }
  out << "SCALARS div_velocity_max double 1\nLOOKUP_TABLE default\n";
  for (double d : divmax) {
    std::snprintf(buf, sizeof(buf), "%.12g\n", d);
    out << buf;
  }
}

}  // namespace stokesfem
