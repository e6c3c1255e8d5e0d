#include <doctest.h>

#include <random>

#include "stokesfem/polybasis.hpp"
#include "stokesfem/quadrature.hpp"

using namespace stokesfem;

TEST_CASE("monomial basis dimensions and low-degree values") {
  CHECK(scalar_space_dim(0) == 1);
  CHECK(scalar_space_dim(1) == 3);
  CHECK(scalar_space_dim(2) == 6);

  const Mesh mesh = Mesh::uniform_unit_square(2);
  Eigen::MatrixX2d pts(1, 2);
  pts.row(0) = mesh.cell_centroid[0].transpose();

  // k=0: the single constant function with zero gradient.
  Eigen::MatrixXd values, gx, gy;
  scalar_basis_values_and_gradients(mesh, 0, 0, pts, values, gx, gy);
  CHECK(values(0, 0) == doctest::Approx(1.0));
  CHECK(gx(0, 0) == 0.0);
  CHECK(gy(0, 0) == 0.0);

  // k=1: {1, xi, eta} vanish (except the constant) at the centroid.
  scalar_basis_values_and_gradients(mesh, 0, 1, pts, values, gx, gy);
  CHECK(values.cols() == 3);
  CHECK(values(0, 0) == doctest::Approx(1.0));
  CHECK(values(0, 1) == doctest::Approx(0.0));
  CHECK(values(0, 2) == doctest::Approx(0.0));
}

TEST_CASE("basis gradients match central differences") {
  const Mesh mesh = Mesh::uniform_unit_square(4);
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double step = 1e-4;
  for (int trial = 0; trial < 10; ++trial) {
    const int c = static_cast<int>(unif(rng) * mesh.num_cells()) % mesh.num_cells();
    const Eigen::Vector2d p =
        mesh.cell_centroid[c] + 0.1 * unif(rng) * (mesh.vertices[mesh.cells[c][0]] -
                                                   mesh.cell_centroid[c]);
    Eigen::MatrixX2d pts(5, 2);
    pts.row(0) = p.transpose();
    pts.row(1) << p.x() + step, p.y();
    pts.row(2) << p.x() - step, p.y();
    pts.row(3) << p.x(), p.y() + step;
    pts.row(4) << p.x(), p.y() - step;
    Eigen::MatrixXd values, gx, gy;
    scalar_basis_values_and_gradients(mesh, c, 2, pts, values, gx, gy);
    for (int j = 0; j < values.cols(); ++j) {
      CHECK(std::abs((values(1, j) - values(2, j)) / (2 * step) - gx(0, j)) < 1e-7);
      CHECK(std::abs((values(3, j) - values(4, j)) / (2 * step) - gy(0, j)) < 1e-7);
    }
  }
}

TEST_CASE("vandermonde is well conditioned on the mesh family") {
  for (int n : {2, 4, 8}) {
    const Mesh mesh = Mesh::uniform_unit_square(n);
    for (int k : {1, 2}) {
      const int m = scalar_space_dim(k);
      for (int c = 0; c < mesh.num_cells(); c += 3) {
        Eigen::MatrixX2d pts(m, 2);
        int row = 0;
        for (int i = 0; i <= k; ++i)
          for (int j = 0; j <= k - i; ++j, ++row)
            pts.row(row) = (mesh.vertices[mesh.cells[c][0]] +
                            (static_cast<double>(i) / k) *
                                (mesh.vertices[mesh.cells[c][1]] - mesh.vertices[mesh.cells[c][0]]) +
                            (static_cast<double>(j) / k) *
                                (mesh.vertices[mesh.cells[c][2]] - mesh.vertices[mesh.cells[c][0]]))
                               .transpose();
        const Eigen::MatrixXd vand = scalar_basis_values(mesh, c, k, pts);
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(vand);
        const double cond = svd.singularValues()(0) / svd.singularValues().tail(1)(0);
        CHECK(cond < 100.0);  // uniform over the family: h_T scaling keeps it flat
      }
    }
  }
}

TEST_CASE("traceless frame structure") {
  const auto& frame = traceless_frame();
  for (const auto& e : frame) CHECK(e.trace() == 0.0);
  CHECK((frame[0].array() * frame[0].array()).sum() == 2.0);
  CHECK((frame[1].array() * frame[1].array()).sum() == 1.0);
  CHECK((frame[2].array() * frame[2].array()).sum() == 1.0);
  CHECK((frame[0].array() * frame[1].array()).sum() == 0.0);
  CHECK((frame[0].array() * frame[2].array()).sum() == 0.0);
  CHECK((frame[1].array() * frame[2].array()).sum() == 0.0);

  // Gram of {E_i phi_j} is block diagonal: blocks (2, 1, 1) * scalar mass.
  Eigen::MatrixXd mass(2, 2);
  mass << 3.0, 0.5, 0.5, 1.25;
  const Eigen::MatrixXd gram = traceless_gram(mass);
  CHECK(gram.rows() == 6);
  CHECK((gram.block(0, 0, 2, 2) - 2 * mass).cwiseAbs().maxCoeff() == 0.0);
  CHECK((gram.block(2, 2, 2, 2) - mass).cwiseAbs().maxCoeff() == 0.0);
  CHECK((gram.block(4, 4, 2, 2) - mass).cwiseAbs().maxCoeff() == 0.0);
  CHECK(gram.block(0, 2, 2, 4).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("edge legendre basis is L2(F)-orthonormal") {
  const double length = std::sqrt(2.0) / 4;
  const QuadratureRule rule = edge_rule(12);
  const Eigen::MatrixXd values = edge_legendre_values(length, 2, rule.points.col(0));
  for (int r = 0; r < 3; ++r)
    for (int s = 0; s < 3; ++s) {
      double acc = 0.0;
      for (Eigen::Index i = 0; i < rule.points.rows(); ++i)
        acc += rule.weights[i] * length * values(i, r) * values(i, s);
      CHECK(acc == doctest::Approx(r == s ? 1.0 : 0.0).epsilon(1e-13));
    }
}
