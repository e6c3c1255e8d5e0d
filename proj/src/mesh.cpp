#include "stokesfem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace stokesfem {

int Mesh::num_boundary_edges() const {
  return static_cast<int>(std::count(edge_on_boundary.begin(), edge_on_boundary.end(), true));
}

double Mesh::max_diameter() const {
  double h = 0.0;
  for (double d : cell_diameter) h = std::max(h, d);
  return h;
}

Mesh Mesh::uniform_unit_square(int n) {
  if (n < 1) throw std::invalid_argument("Mesh::uniform_unit_square: n must be >= 1");

  Mesh mesh;
  mesh.grid_n = n;
  const int nv1 = n + 1;
  mesh.vertices.reserve(static_cast<std::size_t>(nv1) * nv1);
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      mesh.vertices.emplace_back(static_cast<double>(i) / n, static_cast<double>(j) / n);

  auto vid = [nv1](int i, int j) { return j * nv1 + i; };

  mesh.cells.reserve(static_cast<std::size_t>(2) * n * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int p00 = vid(i, j), p10 = vid(i + 1, j);
      const int p01 = vid(i, j + 1), p11 = vid(i + 1, j + 1);
      mesh.cells.push_back({p00, p10, p11});  // below the diagonal
      mesh.cells.push_back({p00, p11, p01});  // above the diagonal
    }
  }

  // Global edge numbering in order of first encounter over the cell loop.
  std::map<std::pair<int, int>, int> edge_index;
  mesh.cell_edges.resize(mesh.cells.size());
  for (int c = 0; c < mesh.num_cells(); ++c) {
    for (int j = 0; j < 3; ++j) {
      const int a = mesh.cells[c][j];
      const int b = mesh.cells[c][(j + 1) % 3];
      const std::pair<int, int> key{std::min(a, b), std::max(a, b)};
      auto [it, inserted] = edge_index.try_emplace(key, static_cast<int>(mesh.edges.size()));
      if (inserted) {
        mesh.edges.push_back({key.first, key.second});
        mesh.edge_cells.push_back({c, -1});
      } else {
        mesh.edge_cells[it->second][1] = c;
      }
      mesh.cell_edges[c][j].edge = it->second;
    }
  }

  const int ne = mesh.num_edges();
  mesh.edge_length.resize(ne);
  mesh.edge_normal.resize(ne);
  mesh.edge_tangent.resize(ne);
  mesh.edge_on_boundary.resize(ne);
  for (int e = 0; e < ne; ++e) {
    const Eigen::Vector2d d = mesh.vertices[mesh.edges[e][1]] - mesh.vertices[mesh.edges[e][0]];
    mesh.edge_length[e] = d.norm();
    mesh.edge_tangent[e] = d / mesh.edge_length[e];
    mesh.edge_normal[e] = Eigen::Vector2d(mesh.edge_tangent[e].y(), -mesh.edge_tangent[e].x());
    mesh.edge_on_boundary[e] = (mesh.edge_cells[e][1] < 0);
  }

  mesh.vertex_on_boundary.assign(mesh.vertices.size(), false);
  for (int e = 0; e < ne; ++e) {
    if (mesh.edge_on_boundary[e]) {
      mesh.vertex_on_boundary[mesh.edges[e][0]] = true;
      mesh.vertex_on_boundary[mesh.edges[e][1]] = true;
    }
  }

  const int nc = mesh.num_cells();
  mesh.cell_area.resize(nc);
  mesh.cell_centroid.resize(nc);
  mesh.cell_diameter.resize(nc);
  for (int c = 0; c < nc; ++c) {
    const Eigen::Vector2d& v0 = mesh.vertices[mesh.cells[c][0]];
    const Eigen::Vector2d& v1 = mesh.vertices[mesh.cells[c][1]];
    const Eigen::Vector2d& v2 = mesh.vertices[mesh.cells[c][2]];
    const double twice = (v1 - v0).x() * (v2 - v0).y() - (v1 - v0).y() * (v2 - v0).x();
    if (twice <= 0.0) throw std::runtime_error("Mesh: cell is not counterclockwise");
    mesh.cell_area[c] = 0.5 * twice;
    mesh.cell_centroid[c] = (v0 + v1 + v2) / 3.0;
    mesh.cell_diameter[c] =
        std::max({(v1 - v0).norm(), (v2 - v1).norm(), (v0 - v2).norm()});

    for (int j = 0; j < 3; ++j) {
      const Eigen::Vector2d& a = mesh.vertices[mesh.cells[c][j]];
      const Eigen::Vector2d& b = mesh.vertices[mesh.cells[c][(j + 1) % 3]];
      const Eigen::Vector2d t = (b - a).normalized();
      const Eigen::Vector2d outward(t.y(), -t.x());  // right normal of a ccw boundary walk
      const double dot = outward.dot(mesh.edge_normal[mesh.cell_edges[c][j].edge]);
      mesh.cell_edges[c][j].sign = dot > 0.0 ? 1 : -1;
    }
  }
  return mesh;
}

void Mesh::flip_normals_for_testing() {
  for (auto& nrm : edge_normal) nrm = -nrm;
}

EdgeGeometry edge_geometry(const Mesh& mesh, int edge) {
  if (edge < 0 || edge >= mesh.num_edges())
    throw std::out_of_range("edge_geometry: edge index out of range");
  EdgeGeometry g;
  g.midpoint = 0.5 * (mesh.vertices[mesh.edges[edge][0]] + mesh.vertices[mesh.edges[edge][1]]);
  g.normal = mesh.edge_normal[edge];
  g.tangent = mesh.edge_tangent[edge];
  g.length = mesh.edge_length[edge];
  return g;
}

}  // namespace stokesfem
