#include "stokesfem/system.hpp"

#include <Eigen/SparseLU>

#include <cmath>
#include <stdexcept>
#include <string>

namespace stokesfem {

StokesSolution solve_stokes(const Mesh& mesh, SpaceConfig config, const VectorField& f) {
  config.validate();
  const VelocitySpace velocity(mesh, config);
  const MultiplierSpace multiplier(mesh, config.k);
  const PressureSpace pressure(mesh, config.l);

  const int nx = velocity.num_free() + multiplier.num_global();
  const int np = pressure.num_global();
  const int n = nx + np + 1;

  const Eigen::SparseMatrix<double> a = assemble_a(mesh, velocity, multiplier);
  const Eigen::SparseMatrix<double> b = assemble_b(mesh, velocity, multiplier, pressure);
  const Eigen::VectorXd load = assemble_load(mesh, velocity, multiplier, f);
  const Eigen::VectorXd mean = pressure.mean_vector();

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(a.nonZeros() + 2 * b.nonZeros() + 2 * np);
  for (int col = 0; col < a.outerSize(); ++col)
    for (Eigen::SparseMatrix<double>::InnerIterator it(a, col); it; ++it)
      triplets.emplace_back(static_cast<int>(it.row()), col, it.value());
  for (int col = 0; col < b.outerSize(); ++col)
    for (Eigen::SparseMatrix<double>::InnerIterator it(b, col); it; ++it) {
      triplets.emplace_back(nx + static_cast<int>(it.row()), col, it.value());
      triplets.emplace_back(col, nx + static_cast<int>(it.row()), it.value());
    }
  for (int q = 0; q < np; ++q) {
    triplets.emplace_back(nx + q, nx + np, mean[q]);
    triplets.emplace_back(nx + np, nx + q, mean[q]);
  }
  const Eigen::SparseMatrix<double> system = matrix_from_triplets(n, n, std::move(triplets));

  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs.head(nx) = load;

  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(system);
  if (lu.info() != Eigen::Success)
    throw std::runtime_error("solve_stokes: sparse factorization failed (n=" +
                             std::to_string(mesh.grid_n) + ", k=" + std::to_string(config.k) +
                             ", l=" + std::to_string(config.l) + ")");
  const Eigen::VectorXd x = lu.solve(rhs);

  StokesSolution solution;
  solution.config = config;
  solution.mesh = &mesh;

  const Eigen::VectorXd axb = system * x - rhs;
  const double scale = rhs.norm() + x.norm();
  solution.residual = axb.norm() / (scale > 0.0 ? scale : 1.0);

  solution.velocity = Eigen::VectorXd::Zero(velocity.num_global());
  for (int g = 0; g < velocity.num_global(); ++g) {
    const int idx = velocity.free_index(g);
    if (idx >= 0) solution.velocity[g] = x[idx];
  }
  solution.multiplier = x.segment(velocity.num_free(), multiplier.num_global());
  solution.pressure = x.segment(nx, np);
  solution.pressure_mean = mean.dot(solution.pressure);
  solution.stress =
      recover_stress(mesh, velocity, multiplier, solution.velocity, solution.multiplier);
  return solution;
}

std::vector<Eigen::VectorXd> recover_stress(const Mesh& mesh, const VelocitySpace& velocity,
                                            const MultiplierSpace& multiplier,
                                            const Eigen::VectorXd& velocity_coeffs,
                                            const Eigen::VectorXd& multiplier_coeffs) {
  std::vector<Eigen::VectorXd> stress(mesh.num_cells());
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const LocalWeakGrad lw = local_weak_devgrad(mesh, velocity, multiplier, c);
    Eigen::VectorXd local(lw.velocity_dofs.size() + lw.multiplier_dofs.size());
    int i = 0;
    for (int g : lw.velocity_dofs) local[i++] = velocity_coeffs[g];
    for (int g : lw.multiplier_dofs) local[i++] = multiplier_coeffs[g];
    stress[c] = lw.grad * local;
  }
  return stress;
}

double divergence_free_residual(const StokesSolution& solution) {
  const Mesh& mesh = *solution.mesh;
  const VelocitySpace velocity(mesh, solution.config);
  const QuadratureRule rule = triangle_rule(18);
  double max_div = 0.0, max_u = 0.0;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const MappedRule vol = map_to_cell(rule, mesh, c);
    const Eigen::VectorXd div = velocity.field_divergence(c, solution.velocity, vol.points);
    Eigen::MatrixX2d vals;
    velocity.field_values(c, solution.velocity, vol.points, vals);
    max_div = std::max(max_div, div.cwiseAbs().maxCoeff());
    max_u = std::max(max_u, vals.cwiseAbs().maxCoeff());
  }
  if (max_u == 0.0) return max_div;
  return max_div * mesh.max_diameter() / max_u;
}

double stress_tn_jump(const StokesSolution& solution) {
  const Mesh& mesh = *solution.mesh;
  const StressSpace stress_space(mesh, solution.config.k);
  const QuadratureRule rule = edge_rule(18);
  const int k = solution.config.k;
  double max_jump = 0.0, scale = 0.0;
  for (int e = 0; e < mesh.num_edges(); ++e) {
    if (mesh.edge_on_boundary[e]) continue;
    const MappedRule edge = map_to_edge(rule, mesh, e);
    const Eigen::MatrixXd legendre =
        edge_legendre_values(mesh.edge_length[e], k, rule.points.col(0));
    const Eigen::Vector2d nf = mesh.edge_normal[e];
    const Eigen::Vector2d tf = mesh.edge_tangent[e];
    Eigen::VectorXd jump = Eigen::VectorXd::Zero(k + 1);
    for (int side = 0; side < 2; ++side) {
      const int c = mesh.edge_cells[e][side];
      int sign = 0;
      for (int j = 0; j < 3; ++j)
        if (mesh.cell_edges[c][j].edge == e) sign = mesh.cell_edges[c][j].sign;
      std::vector<Eigen::Matrix2d> tau;
      stress_space.field_values(c, solution.stress[c], edge.points, tau);
      Eigen::VectorXd tn(edge.points.rows());
      for (Eigen::Index i = 0; i < edge.points.rows(); ++i) tn[i] = tf.dot(tau[i] * nf);
      for (int r = 0; r <= k; ++r) {
        const double moment = edge.weights.cwiseProduct(legendre.col(r)).dot(tn);
        jump[r] += sign * moment;
        scale = std::max(scale, std::abs(moment));
      }
    }
    max_jump = std::max(max_jump, jump.cwiseAbs().maxCoeff());
  }
  return scale > 0.0 ? max_jump / scale : max_jump;
}

}  // namespace stokesfem
