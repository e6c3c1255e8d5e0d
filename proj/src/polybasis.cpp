#include "stokesfem/polybasis.hpp"

#include <cmath>
#include <stdexcept>

namespace stokesfem {

std::vector<std::array<int, 2>> monomial_exponents(int k) {
  std::vector<std::array<int, 2>> exps;
  exps.reserve(scalar_space_dim(k));
  for (int d = 0; d <= k; ++d)
    for (int b = 0; b <= d; ++b) exps.push_back({d - b, b});
  return exps;
}

namespace {

// Powers of xi and eta up to degree k for all points: (npoints x (k+1)).
void centered_powers(const Mesh& mesh, int cell, int k, const Eigen::MatrixX2d& pts,
                     Eigen::MatrixXd& px, Eigen::MatrixXd& py) {
  const Eigen::Vector2d c = mesh.cell_centroid[cell];
  const double inv_h = 1.0 / mesh.cell_diameter[cell];
  const Eigen::Index n = pts.rows();
  px.resize(n, k + 1);
  py.resize(n, k + 1);
  px.col(0).setOnes();
  py.col(0).setOnes();
  if (k >= 1) {
    px.col(1) = (pts.col(0).array() - c.x()) * inv_h;
    py.col(1) = (pts.col(1).array() - c.y()) * inv_h;
    for (int d = 2; d <= k; ++d) {
      px.col(d) = px.col(d - 1).cwiseProduct(px.col(1));
      py.col(d) = py.col(d - 1).cwiseProduct(py.col(1));
    }
  }
}

}  // namespace

Eigen::MatrixXd scalar_basis_values(const Mesh& mesh, int cell, int k,
                                    const Eigen::MatrixX2d& points) {
  Eigen::MatrixXd px, py;
  centered_powers(mesh, cell, k, points, px, py);
  const auto exps = monomial_exponents(k);
  Eigen::MatrixXd values(points.rows(), exps.size());
  for (std::size_t m = 0; m < exps.size(); ++m)
    values.col(m) = px.col(exps[m][0]).cwiseProduct(py.col(exps[m][1]));
  return values;
}

void scalar_basis_values_and_gradients(const Mesh& mesh, int cell, int k,
                                       const Eigen::MatrixX2d& points,
                                       Eigen::MatrixXd& values, Eigen::MatrixXd& grad_x,
                                       Eigen::MatrixXd& grad_y) {
  Eigen::MatrixXd px, py;
  centered_powers(mesh, cell, k, points, px, py);
  const double inv_h = 1.0 / mesh.cell_diameter[cell];
  const auto exps = monomial_exponents(k);
  const Eigen::Index n = points.rows();
  values.resize(n, exps.size());
  grad_x.resize(n, exps.size());
  grad_y.resize(n, exps.size());
  for (std::size_t m = 0; m < exps.size(); ++m) {
    const int a = exps[m][0], b = exps[m][1];
    values.col(m) = px.col(a).cwiseProduct(py.col(b));
    grad_x.col(m) = (a == 0) ? Eigen::VectorXd::Zero(n).eval()
                             : (a * inv_h) * px.col(a - 1).cwiseProduct(py.col(b));
    grad_y.col(m) = (b == 0) ? Eigen::VectorXd::Zero(n).eval()
                             : (b * inv_h) * px.col(a).cwiseProduct(py.col(b - 1));
  }
}

const std::array<Eigen::Matrix2d, 3>& traceless_frame() {
  static const std::array<Eigen::Matrix2d, 3> frame = [] {
    std::array<Eigen::Matrix2d, 3> f;
    f[0] << 1, 0, 0, -1;
    f[1] << 0, 1, 0, 0;
    f[2] << 0, 0, 1, 0;
    return f;
  }();
  return frame;
}

const std::array<double, 3>& traceless_frame_weights() {
  static const std::array<double, 3> w = {2.0, 1.0, 1.0};
  return w;
}

Eigen::MatrixXd traceless_gram(const Eigen::MatrixXd& scalar_mass) {
  const Eigen::Index m = scalar_mass.rows();
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(3 * m, 3 * m);
  const auto& w = traceless_frame_weights();
  for (int a = 0; a < 3; ++a) gram.block(a * m, a * m, m, m) = w[a] * scalar_mass;
  return gram;
}

Eigen::MatrixXd edge_legendre_values(double edge_length, int k, const Eigen::VectorXd& sfrac) {
  const Eigen::Index n = sfrac.size();
  Eigen::MatrixXd values(n, k + 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double x = 2.0 * sfrac[i] - 1.0;
    double p0 = 1.0, p1 = x;
    for (int r = 0; r <= k; ++r) {
      double pr;
      if (r == 0) {
        pr = 1.0;
      } else if (r == 1) {
        pr = x;
      } else {
        pr = ((2.0 * r - 1.0) * x * p1 - (r - 1.0) * p0) / r;
        p0 = p1;
        p1 = pr;
      }
      values(i, r) = std::sqrt((2.0 * r + 1.0) / edge_length) * pr;
    }
  }
  return values;
}

}  // namespace stokesfem
