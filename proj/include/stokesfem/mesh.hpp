#pragma once

#include <Eigen/Dense>

#include <array>
#include <string>
#include <vector>

namespace stokesfem {

/// Immutable 2D simplicial mesh of the unit square with globally oriented
/// edges.
///
/// Each edge stores its endpoints as (a, b) with a < b. The tangent t_F points
/// from a to b and the normal is the tangent rotated by -90 degrees,
/// n_F = (t_y, -t_x), so that t_F is n_F rotated by +90 degrees. Every cell
/// records, per edge, the sign relating the global edge normal to the cell's
/// outward normal: sign * n_F = outward normal.
struct Mesh {
  struct CellEdge {
    int edge = -1;  ///< global edge index
    int sign = 0;   ///< +1 if the cell's outward normal equals edge_normal[edge]
  };

  std::vector<Eigen::Vector2d> vertices;
  std::vector<std::array<int, 3>> cells;  ///< counterclockwise vertex triples
  std::vector<std::array<int, 2>> edges;  ///< endpoint pairs (a, b), a < b
  /// Local edge j of a cell joins cell vertices (j, (j+1) % 3).
  std::vector<std::array<CellEdge, 3>> cell_edges;
  /// Adjacent cells per edge, ordered by cell index; second entry is -1 on the
  /// boundary.
  std::vector<std::array<int, 2>> edge_cells;
  std::vector<bool> edge_on_boundary;
  std::vector<bool> vertex_on_boundary;
  std::vector<double> cell_diameter;           ///< h_T
  std::vector<double> cell_area;               ///< positive (cells are ccw)
  std::vector<Eigen::Vector2d> cell_centroid;  ///< c_T
  std::vector<double> edge_length;             ///< h_F
  std::vector<Eigen::Vector2d> edge_normal;    ///< n_F
  std::vector<Eigen::Vector2d> edge_tangent;   ///< t_F
  int grid_n = 0;  ///< subdivisions per side of the unit square

  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_cells() const { return static_cast<int>(cells.size()); }
  int num_edges() const { return static_cast<int>(edges.size()); }
  int num_boundary_edges() const;
  int num_interior_edges() const { return num_edges() - num_boundary_edges(); }
  double max_diameter() const;

  /// Uniform triangulation of (0,1)^2 into n x n squares, each split along the
  /// lower-left to upper-right diagonal.
  ///
  /// Throws std::invalid_argument for n < 1. The result has (n+1)^2 vertices,
  /// 2n^2 cells, 3n^2 + 2n edges of which 4n lie on the boundary.
  static Mesh uniform_unit_square(int n);

  /// Name of the diagonal split convention, recorded in output metadata.
  static const char* diagonal_convention() { return "lower-left-to-upper-right"; }

  /// Fault injection for negative tests: negates every edge normal without
  /// updating cell_edges signs or tangents, breaking the outward-normal
  /// relation that assembly relies on.
  void flip_normals_for_testing();
};

struct EdgeGeometry {
  Eigen::Vector2d midpoint;
  Eigen::Vector2d normal;
  Eigen::Vector2d tangent;
  double length = 0.0;
};

/// Midpoint, oriented frame and length of an edge. Throws std::out_of_range
/// for an invalid index.
EdgeGeometry edge_geometry(const Mesh& mesh, int edge);

}  // namespace stokesfem
