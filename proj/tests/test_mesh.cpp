#include <doctest.h>

#include <cmath>

#include "stokesfem/mesh.hpp"

using namespace stokesfem;

TEST_CASE("uniform mesh entity counts") {
  SUBCASE("n=1") {
    const Mesh mesh = Mesh::uniform_unit_square(1);
    CHECK(mesh.num_vertices() == 4);
    CHECK(mesh.num_cells() == 2);
    CHECK(mesh.num_edges() == 5);
    CHECK(mesh.num_boundary_edges() == 4);
    CHECK(mesh.num_interior_edges() == 1);
  }
  SUBCASE("n=2") {
    const Mesh mesh = Mesh::uniform_unit_square(2);
    CHECK(mesh.num_vertices() == 9);
    CHECK(mesh.num_cells() == 8);
    CHECK(mesh.num_edges() == 16);
    CHECK(mesh.num_boundary_edges() == 8);
    CHECK(mesh.num_interior_edges() == 8);
    CHECK(mesh.num_vertices() - mesh.num_edges() + mesh.num_cells() == 1);
  }
  SUBCASE("n=8 matches the coarsest study level") {
    const Mesh mesh = Mesh::uniform_unit_square(8);
    CHECK(mesh.num_cells() == 128);
    CHECK(mesh.max_diameter() == doctest::Approx(std::sqrt(2.0) / 8).epsilon(1e-14));
  }
}

TEST_CASE("invalid mesh size rejected") {
  CHECK_THROWS_AS(Mesh::uniform_unit_square(0), std::invalid_argument);
  CHECK_THROWS_AS(Mesh::uniform_unit_square(-3), std::invalid_argument);
}

TEST_CASE("edge geometry conventions") {
  const Mesh mesh = Mesh::uniform_unit_square(1);
  // Find the bottom edge (0,0)-(1,0), the diagonal, and the left edge.
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const auto geom = edge_geometry(mesh, e);
    const Eigen::Vector2d a = mesh.vertices[mesh.edges[e][0]];
    const Eigen::Vector2d b = mesh.vertices[mesh.edges[e][1]];
    if (a == Eigen::Vector2d(0, 0) && b == Eigen::Vector2d(1, 0)) {
      CHECK(geom.tangent.isApprox(Eigen::Vector2d(1, 0), 1e-14));
      CHECK(geom.normal.isApprox(Eigen::Vector2d(0, -1), 1e-14));
      CHECK(geom.length == doctest::Approx(1.0));
    }
    if (a == Eigen::Vector2d(0, 0) && b == Eigen::Vector2d(1, 1)) {
      CHECK(geom.length == doctest::Approx(std::sqrt(2.0)));
    }
    if (a == Eigen::Vector2d(0, 0) && b == Eigen::Vector2d(0, 1)) {
      CHECK(geom.tangent.isApprox(Eigen::Vector2d(0, 1), 1e-14));
      CHECK(geom.normal.isApprox(Eigen::Vector2d(1, 0), 1e-14));
    }
    // n rotated by +90 gives t on every edge.
    CHECK((Eigen::Vector2d(-geom.normal.y(), geom.normal.x()) - geom.tangent).norm() < 1e-14);
  }
  CHECK_THROWS_AS(edge_geometry(mesh, 99), std::out_of_range);
}

TEST_CASE("outward normals, signs and closure") {
  const Mesh mesh = Mesh::uniform_unit_square(3);
  for (int c = 0; c < mesh.num_cells(); ++c) {
    CHECK(mesh.cell_area[c] > 0.0);
    Eigen::Vector2d closure = Eigen::Vector2d::Zero();
    for (int j = 0; j < 3; ++j) {
      const auto ce = mesh.cell_edges[c][j];
      const Eigen::Vector2d a = mesh.vertices[mesh.cells[c][j]];
      const Eigen::Vector2d b = mesh.vertices[mesh.cells[c][(j + 1) % 3]];
      const Eigen::Vector2d t = (b - a).normalized();
      const Eigen::Vector2d outward(t.y(), -t.x());
      CHECK((outward - ce.sign * mesh.edge_normal[ce.edge]).norm() < 1e-12);
      closure += mesh.edge_length[ce.edge] * ce.sign * mesh.edge_normal[ce.edge];
    }
    CHECK(closure.norm() < 1e-12);
  }
  for (int e = 0; e < mesh.num_edges(); ++e) {
    if (mesh.edge_on_boundary[e]) {
      CHECK(mesh.edge_cells[e][1] == -1);
    } else {
      int sum = 0;
      for (int side = 0; side < 2; ++side) {
        const int c = mesh.edge_cells[e][side];
        for (int j = 0; j < 3; ++j)
          if (mesh.cell_edges[c][j].edge == e) sum += mesh.cell_edges[c][j].sign;
      }
      CHECK(sum == 0);
      CHECK(mesh.edge_cells[e][0] < mesh.edge_cells[e][1]);
    }
  }
}

TEST_CASE("refinement multiplies cells by four") {
  for (int n : {1, 2, 4}) {
    CHECK(Mesh::uniform_unit_square(2 * n).num_cells() ==
          4 * Mesh::uniform_unit_square(n).num_cells());
  }
}
