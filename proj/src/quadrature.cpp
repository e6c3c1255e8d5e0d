#include "stokesfem/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace stokesfem {

void gauss_legendre(int npts, Eigen::VectorXd& nodes, Eigen::VectorXd& weights) {
  if (npts < 1) throw std::invalid_argument("gauss_legendre: npts must be >= 1");
  nodes.resize(npts);
  weights.resize(npts);
  const double pi = std::acos(-1.0);
  for (int i = 0; i < npts; ++i) {
    // Chebyshev initial guess, then Newton on P_n.
    double x = std::cos(pi * (i + 0.75) / (npts + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      if (npts == 1) {
        p1 = x;
      }
      for (int j = 2; j <= npts; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      const double pn = (npts == 1) ? x : p1;
      const double pn1 = (npts == 1) ? 1.0 : p0;
      dp = npts * (x * pn - pn1) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[npts - 1 - i] = x;
    weights[npts - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
}

QuadratureRule triangle_rule(int exactness) {
  if (exactness < 0) throw std::invalid_argument("triangle_rule: exactness must be >= 0");
  // Duffy map (a, b) in [0,1]^2 -> (a, b (1 - a)); the Jacobian (1 - a) raises
  // the degree in the first coordinate by one.
  const int m = (exactness + 3) / 2;
  Eigen::VectorXd gx, gw;
  gauss_legendre(m, gx, gw);
  QuadratureRule rule;
  rule.exactness = exactness;
  rule.points.resize(m * m, 2);
  rule.weights.resize(m * m);
  int idx = 0;
  for (int i = 0; i < m; ++i) {
    const double a = 0.5 * (gx[i] + 1.0);
    const double wa = 0.5 * gw[i];
    for (int j = 0; j < m; ++j) {
      const double b = 0.5 * (gx[j] + 1.0);
      const double wb = 0.5 * gw[j];
      rule.points(idx, 0) = a;
      rule.points(idx, 1) = b * (1.0 - a);
      rule.weights[idx] = wa * wb * (1.0 - a);
      ++idx;
    }
  }
  return rule;
}

QuadratureRule edge_rule(int exactness) {
  if (exactness < 0) throw std::invalid_argument("edge_rule: exactness must be >= 0");
  const int m = (exactness + 2) / 2;
  Eigen::VectorXd gx, gw;
  gauss_legendre(m, gx, gw);
  QuadratureRule rule;
  rule.exactness = 2 * m - 1;
  rule.points.resize(m, 2);
  rule.weights.resize(m);
  for (int i = 0; i < m; ++i) {
    rule.points(i, 0) = 0.5 * (gx[i] + 1.0);
    rule.points(i, 1) = 0.0;
    rule.weights[i] = 0.5 * gw[i];
  }
  return rule;
}

MappedRule map_to_cell(const QuadratureRule& rule, const Mesh& mesh, int cell) {
  const Eigen::Vector2d& v0 = mesh.vertices[mesh.cells[cell][0]];
  const Eigen::Vector2d& v1 = mesh.vertices[mesh.cells[cell][1]];
  const Eigen::Vector2d& v2 = mesh.vertices[mesh.cells[cell][2]];
  const double jac = 2.0 * mesh.cell_area[cell];
  MappedRule mapped;
  const Eigen::Index n = rule.points.rows();
  mapped.points.resize(n, 2);
  mapped.weights.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double a = rule.points(i, 0), b = rule.points(i, 1);
    mapped.points.row(i) = (v0 + a * (v1 - v0) + b * (v2 - v0)).transpose();
    mapped.weights[i] = rule.weights[i] * jac;
  }
  return mapped;
}

MappedRule map_to_edge(const QuadratureRule& rule, const Mesh& mesh, int edge) {
  const Eigen::Vector2d& a = mesh.vertices[mesh.edges[edge][0]];
  const Eigen::Vector2d& b = mesh.vertices[mesh.edges[edge][1]];
  MappedRule mapped;
  const Eigen::Index n = rule.points.rows();
  mapped.points.resize(n, 2);
  mapped.weights.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double s = rule.points(i, 0);
    mapped.points.row(i) = (a + s * (b - a)).transpose();
    mapped.weights[i] = rule.weights[i] * mesh.edge_length[edge];
  }
  return mapped;
}

}  // namespace stokesfem
