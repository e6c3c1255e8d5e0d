#include "stokesfem/postproc.hpp"

#include <Eigen/LU>

#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>

namespace stokesfem {

namespace {
constexpr int kVolumeExactness = 18;
constexpr int kEdgeExactness = 18;
}  // namespace

void PostprocessedVelocity::values(int cell, const Eigen::MatrixX2d& points,
                                   Eigen::MatrixX2d& out) const {
  const Eigen::MatrixXd basis = scalar_basis_values(*mesh, cell, k + 1, points);
  const int m = scalar_space_dim(k + 1);
  out.resize(points.rows(), 2);
  out.col(0) = basis * coeffs[cell].head(m);
  out.col(1) = basis * coeffs[cell].tail(m);
}

void PostprocessedVelocity::gradients(int cell, const Eigen::MatrixX2d& points,
                                      std::vector<Eigen::Matrix2d>& out) const {
  Eigen::MatrixXd basis, gx, gy;
  scalar_basis_values_and_gradients(*mesh, cell, k + 1, points, basis, gx, gy);
  const int m = scalar_space_dim(k + 1);
  const Eigen::VectorXd cx = coeffs[cell].head(m);
  const Eigen::VectorXd cy = coeffs[cell].tail(m);
  out.resize(points.rows());
  const Eigen::VectorXd du1dx = gx * cx, du1dy = gy * cx;
  const Eigen::VectorXd du2dx = gx * cy, du2dy = gy * cy;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    out[i](0, 0) = du1dx[i];
    out[i](0, 1) = du1dy[i];
    out[i](1, 0) = du2dx[i];
    out[i](1, 1) = du2dy[i];
  }
}

Eigen::VectorXd PostprocessedVelocity::divergence(int cell, const Eigen::MatrixX2d& points) const {
  Eigen::MatrixXd basis, gx, gy;
  scalar_basis_values_and_gradients(*mesh, cell, k + 1, points, basis, gx, gy);
  const int m = scalar_space_dim(k + 1);
  return gx * coeffs[cell].head(m) + gy * coeffs[cell].tail(m);
}

PostprocessedVelocity postprocess(const StokesSolution& solution) {
  const Mesh& mesh = *solution.mesh;
  const int k = solution.config.k;
  const VelocitySpace velocity(mesh, solution.config);
  const StressSpace stress_space(mesh, k);
  const QuadratureRule vol_rule = triangle_rule(kVolumeExactness);
  const QuadratureRule edg_rule = edge_rule(kEdgeExactness);

  const int m1 = scalar_space_dim(k + 1);  // dim P_{k+1}
  const int mp = scalar_space_dim(k) - 1;  // dim P_k cap L_0^2
  const int n = 2 * m1 + mp + 3;

  PostprocessedVelocity post;
  post.k = k;
  post.mesh = &mesh;
  post.coeffs.resize(mesh.num_cells());
  post.debug_pressure.resize(mesh.num_cells());

  for (int c = 0; c < mesh.num_cells(); ++c) {
    const MappedRule vol = map_to_cell(vol_rule, mesh, c);
    Eigen::MatrixXd basis, gx, gy;
    scalar_basis_values_and_gradients(mesh, c, k + 1, vol.points, basis, gx, gy);

    // Scalar stiffness; the vector problem is block diagonal across
    // components in the (grad, grad) term.
    const Eigen::MatrixXd stiff = gx.transpose() * vol.weights.asDiagonal() * gx +
                                  gy.transpose() * vol.weights.asDiagonal() * gy;

    // Zero-mean P_k basis: monomials with the cell average removed.
    Eigen::MatrixXd pbasis;
    if (mp > 0) {
      const Eigen::MatrixXd pk = scalar_basis_values(mesh, c, k, vol.points);
      const double area = mesh.cell_area[c];
      pbasis.resize(vol.points.rows(), mp);
      for (int j = 0; j < mp; ++j) {
        const double avg = vol.weights.dot(pk.col(j + 1)) / area;
        pbasis.col(j) = pk.col(j + 1).array() - avg;
      }
    }

    Eigen::MatrixXd system = Eigen::MatrixXd::Zero(n, n);
    system.block(0, 0, m1, m1) = stiff;
    system.block(m1, m1, m1, m1) = stiff;
    if (mp > 0) {
      const Eigen::MatrixXd div_px = gx.transpose() * vol.weights.asDiagonal() * pbasis;
      const Eigen::MatrixXd div_py = gy.transpose() * vol.weights.asDiagonal() * pbasis;
      system.block(0, 2 * m1, m1, mp) = div_px;
      system.block(m1, 2 * m1, m1, mp) = div_py;
      system.block(2 * m1, 0, mp, m1) = div_px.transpose();
      system.block(2 * m1, m1, mp, m1) = div_py.transpose();
    }

    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    std::vector<Eigen::Matrix2d> sigma;
    stress_space.field_values(c, solution.stress[c], vol.points, sigma);
    Eigen::VectorXd s00(vol.points.rows()), s01(vol.points.rows());
    Eigen::VectorXd s10(vol.points.rows()), s11(vol.points.rows());
    for (Eigen::Index i = 0; i < vol.points.rows(); ++i) {
      s00[i] = sigma[i](0, 0);
      s01[i] = sigma[i](0, 1);
      s10[i] = sigma[i](1, 0);
      s11[i] = sigma[i](1, 1);
    }
    rhs.head(m1) = gx.transpose() * vol.weights.cwiseProduct(s00) +
                   gy.transpose() * vol.weights.cwiseProduct(s01);
    rhs.segment(m1, m1) = gx.transpose() * vol.weights.cwiseProduct(s10) +
                          gy.transpose() * vol.weights.cwiseProduct(s11);

    // Mean edge-flux constraints with the cell's outward normal.
    for (int j = 0; j < 3; ++j) {
      const int e = mesh.cell_edges[c][j].edge;
      const int sign = mesh.cell_edges[c][j].sign;
      const MappedRule edge = map_to_edge(edg_rule, mesh, e);
      const Eigen::MatrixXd ebasis = scalar_basis_values(mesh, c, k + 1, edge.points);
      const Eigen::Vector2d nout = sign * mesh.edge_normal[e];
      const Eigen::VectorXd moments = ebasis.transpose() * edge.weights;
      const int row = 2 * m1 + mp + j;
      system.row(row).head(m1) = nout.x() * moments.transpose();
      system.row(row).segment(m1, m1) = nout.y() * moments.transpose();
      system.col(row).head(m1) = nout.x() * moments;
      system.col(row).segment(m1, m1) = nout.y() * moments;

      Eigen::MatrixX2d uh;
      velocity.field_values(c, solution.velocity, edge.points, uh);
      rhs[row] = edge.weights.dot(uh.col(0) * nout.x() + uh.col(1) * nout.y());
    }

    Eigen::FullPivLU<Eigen::MatrixXd> lu(system);
    if (!lu.isInvertible())
      throw std::runtime_error("postprocess: singular local system on cell " + std::to_string(c));
    const Eigen::VectorXd sol = lu.solve(rhs);
    post.coeffs[c] = sol.head(2 * m1);
    post.debug_pressure[c] = sol.segment(2 * m1, mp);
  }
  return post;
}

namespace {

// I_{k,k} interpolant evaluated against the discrete solution; when the solve
// used l < k the RT_k space is built separately for the measurement.
struct SuperconvergenceField {
  std::unique_ptr<VelocitySpace> owned;
  const VelocitySpace* space = nullptr;
  Eigen::VectorXd coeffs;
};

SuperconvergenceField rt_interpolant(const StokesSolution& solution, const VelocitySpace& velocity,
                                     const ExactSolution& exact) {
  SuperconvergenceField field;
  if (solution.config.raviart_thomas()) {
    field.space = &velocity;
  } else {
    field.owned = std::make_unique<VelocitySpace>(*solution.mesh,
                                                  SpaceConfig{solution.config.k, solution.config.k});
    field.space = field.owned.get();
  }
  field.coeffs = field.space->interpolate(exact.velocity);
  return field;
}

}  // namespace

ErrorRow error_norms(const StokesSolution& solution, const PostprocessedVelocity* postprocessed,
                     const ExactSolution& exact) {
  const Mesh& mesh = *solution.mesh;
  const int k = solution.config.k;
  const VelocitySpace velocity(mesh, solution.config);
  const PressureSpace pressure(mesh, solution.config.l);
  const StressSpace stress_space(mesh, k);
  const QuadratureRule vol_rule = triangle_rule(kVolumeExactness);
  const QuadratureRule edg_rule = edge_rule(kEdgeExactness);

  const SuperconvergenceField iu = rt_interpolant(solution, velocity, exact);
  const std::vector<Eigen::VectorXd> qsigma = stress_space.l2_project(exact.velocity_gradient);

  ErrorRow row;
  row.h = 1.0 / mesh.grid_n;
  row.solver_residual = solution.residual;

  double e_u = 0.0, e_sigma = 0.0, e_p = 0.0, e_iu = 0.0, e_qsigma = 0.0;
  double e_upost = 0.0, e_grad_upost = 0.0, face_term = 0.0;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const MappedRule vol = map_to_cell(vol_rule, mesh, c);
    const Eigen::Index npts = vol.points.rows();

    Eigen::MatrixX2d uh;
    velocity.field_values(c, solution.velocity, vol.points, uh);
    Eigen::MatrixX2d iu_vals;
    iu.space->field_values(c, iu.coeffs, vol.points, iu_vals);
    std::vector<Eigen::Matrix2d> sigma_h;
    stress_space.field_values(c, solution.stress[c], vol.points, sigma_h);
    std::vector<Eigen::Matrix2d> qsig;
    stress_space.field_values(c, qsigma[c], vol.points, qsig);
    const Eigen::VectorXd ph = pressure.field_values(c, solution.pressure, vol.points);

    Eigen::MatrixX2d upost_vals;
    std::vector<Eigen::Matrix2d> upost_grads;
    if (postprocessed) {
      postprocessed->values(c, vol.points, upost_vals);
      postprocessed->gradients(c, vol.points, upost_grads);
    }

    for (Eigen::Index i = 0; i < npts; ++i) {
      const double x = vol.points(i, 0), y = vol.points(i, 1);
      const double w = vol.weights[i];
      const Eigen::Vector2d ue = exact.velocity(x, y);
      const Eigen::Matrix2d se = exact.velocity_gradient(x, y);
      e_u += w * (ue - uh.row(i).transpose()).squaredNorm();
      e_iu += w * (iu_vals.row(i) - uh.row(i)).squaredNorm();
      e_sigma += w * (se - sigma_h[i]).squaredNorm();
      e_qsigma += w * (qsig[i] - sigma_h[i]).squaredNorm();
      e_p += w * std::pow(exact.pressure(x, y) - ph[i], 2);
      if (postprocessed) {
        e_upost += w * (ue - upost_vals.row(i).transpose()).squaredNorm();
        e_grad_upost += w * (se - upost_grads[i]).squaredNorm();
      }
    }
  }

  // Face part of ||sigma - sigma_h||_{0,h}; the discrete trace is taken from
  // the lower-indexed adjacent cell.
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const int c = mesh.edge_cells[e][0];
    const MappedRule edge = map_to_edge(edg_rule, mesh, e);
    std::vector<Eigen::Matrix2d> sigma_h;
    stress_space.field_values(c, solution.stress[c], edge.points, sigma_h);
    const Eigen::Vector2d nf = mesh.edge_normal[e];
    const Eigen::Vector2d tf = mesh.edge_tangent[e];
    double acc = 0.0;
    for (Eigen::Index i = 0; i < edge.points.rows(); ++i) {
      const Eigen::Matrix2d diff =
          exact.velocity_gradient(edge.points(i, 0), edge.points(i, 1)) - sigma_h[i];
      acc += edge.weights[i] * std::pow(tf.dot(diff * nf), 2);
    }
    face_term += mesh.edge_length[e] * acc;
  }

  row.err_u = std::sqrt(e_u);
  row.err_sigma = std::sqrt(e_sigma);
  row.err_sigma_0h = std::sqrt(e_sigma + face_term);
  row.err_p = std::sqrt(e_p);
  row.err_iu = std::sqrt(e_iu);
  row.err_qsigma = std::sqrt(e_qsigma);
  if (postprocessed) {
    row.err_upost = std::sqrt(e_upost);
    row.err_grad_upost = std::sqrt(e_grad_upost);
    row.has_postprocessed = true;
  }
  row.div_residual = divergence_free_residual(solution);
  row.tn_jump = stress_tn_jump(solution);
  return row;
}

std::optional<double> ErrorReport::order(double coarse, double fine) {
  if (coarse <= 0.0 || fine <= 0.0) return std::nullopt;
  return std::log2(coarse / fine);
}

}  // namespace stokesfem
