#pragma once

#include <string>

#include "stokesfem/system.hpp"

namespace stokesfem {

/// Legacy VTK ASCII (version 2.0) dump of the triangulation.
void write_vtk_mesh(const Mesh& mesh, const std::string& path);

/// Legacy VTK ASCII dump with cell data: cell-averaged velocity vectors,
/// cell-averaged pressure, and the per-cell max |div u_h|.
void write_vtk_solution(const StokesSolution& solution, const std::string& path);

}  // namespace stokesfem
