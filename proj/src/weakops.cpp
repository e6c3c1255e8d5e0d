#include "stokesfem/weakops.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <stdexcept>

namespace stokesfem {

namespace {
constexpr int kVolumeExactness = 18;
constexpr int kEdgeExactness = 18;
}  // namespace

LocalWeakGrad local_weak_devgrad(const Mesh& mesh, const VelocitySpace& velocity,
                                 const MultiplierSpace& multiplier, int cell,
                                 bool include_boundary_multipliers) {
  const int k = velocity.config().k;
  if (multiplier.degree() != k)
    throw std::invalid_argument("local_weak_devgrad: multiplier degree must equal k");
  const int m = scalar_space_dim(k);
  const int n_u = velocity.local_dim();
  const auto& frame = traceless_frame();
  const auto& fw = traceless_frame_weights();

  LocalWeakGrad lw;
  lw.velocity_dofs = velocity.cell_global_dofs(cell);
  for (int j = 0; j < 3; ++j) {
    const int e = mesh.cell_edges[cell][j].edge;
    const int base = multiplier.edge_base(e);
    if (base < 0 && !include_boundary_multipliers) continue;
    for (int r = 0; r <= k; ++r) lw.multiplier_dofs.push_back(base < 0 ? -1 : base + r);
  }
  const int n_lam = static_cast<int>(lw.multiplier_dofs.size());
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(3 * m, n_u + n_lam);

  const QuadratureRule vol_rule = triangle_rule(kVolumeExactness);
  const QuadratureRule edg_rule = edge_rule(kEdgeExactness);
  const MappedRule vol = map_to_cell(vol_rule, mesh, cell);

  // Volume part: -(v, div(E_a phi_b))_T with div(E_a phi_b) = E_a grad phi_b.
  Eigen::MatrixXd phi, gx, gy;
  scalar_basis_values_and_gradients(mesh, cell, k, vol.points, phi, gx, gy);
  Eigen::MatrixXd vx, vy;
  velocity.shape_values(cell, vol.points, vx, vy);
  for (int a = 0; a < 3; ++a) {
    const Eigen::MatrixXd div_x = frame[a](0, 0) * gx + frame[a](0, 1) * gy;
    const Eigen::MatrixXd div_y = frame[a](1, 0) * gx + frame[a](1, 1) * gy;
    for (int i = 0; i < m; ++i)
      b.row(a * m + i).head(n_u) =
          -(vol.weights.cwiseProduct(div_x.col(i)).transpose() * vx +
            vol.weights.cwiseProduct(div_y.col(i)).transpose() * vy);
  }

  // Boundary parts: (n.v, n^T tau n)_dT and (mu, Pi_F tau n)_dT with the
  // outward normal n = sign * n_F.
  int lam_col = 0;
  for (int j = 0; j < 3; ++j) {
    const int e = mesh.cell_edges[cell][j].edge;
    const int sign = mesh.cell_edges[cell][j].sign;
    const MappedRule edge = map_to_edge(edg_rule, mesh, e);
    const Eigen::MatrixXd ephi = scalar_basis_values(mesh, cell, k, edge.points);
    const Eigen::Vector2d nf = mesh.edge_normal[e];
    const Eigen::Vector2d tf = mesh.edge_tangent[e];
    Eigen::MatrixXd evx, evy;
    velocity.shape_values(cell, edge.points, evx, evy);
    const Eigen::MatrixXd vn = nf.x() * evx + nf.y() * evy;

    const bool has_mu = (multiplier.edge_base(e) >= 0) || include_boundary_multipliers;
    Eigen::MatrixXd legendre;
    if (has_mu)
      legendre = edge_legendre_values(mesh.edge_length[e], k, edg_rule.points.col(0));

    for (int a = 0; a < 3; ++a) {
      const double nEn = nf.dot(frame[a] * nf);
      const double tEn = tf.dot(frame[a] * nf);
      for (int i = 0; i < m; ++i) {
        const Eigen::VectorXd wphi = edge.weights.cwiseProduct(ephi.col(i));
        // sign from n.v; (n^T tau n) is even in the normal direction.
        b.row(a * m + i).head(n_u) += (sign * nEn) * (wphi.transpose() * vn);
        if (has_mu)
          for (int r = 0; r <= k; ++r)
            b(a * m + i, n_u + lam_col + r) += sign * tEn * wphi.dot(legendre.col(r));
      }
    }
    if (has_mu) lam_col += k + 1;
  }

  const Eigen::MatrixXd mass = phi.transpose() * vol.weights.asDiagonal() * phi;
  lw.gram = traceless_gram(mass);
  Eigen::LLT<Eigen::MatrixXd> llt(lw.gram);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("local_weak_devgrad: singular frame Gram matrix");
  lw.grad = llt.solve(b);
  return lw;
}

Eigen::SparseMatrix<double> matrix_from_triplets(int rows, int cols,
                                                 std::vector<Eigen::Triplet<double>> triplets) {
  std::sort(triplets.begin(), triplets.end(),
            [](const Eigen::Triplet<double>& x, const Eigen::Triplet<double>& y) {
              return x.row() != y.row() ? x.row() < y.row() : x.col() < y.col();
            });
  std::vector<Eigen::Triplet<double>> compact;
  compact.reserve(triplets.size());
  for (const auto& t : triplets) {
    if (!compact.empty() && compact.back().row() == t.row() && compact.back().col() == t.col())
      compact.back() = {t.row(), t.col(), compact.back().value() + t.value()};
    else
      compact.push_back(t);
  }
  Eigen::SparseMatrix<double> matrix(rows, cols);
  matrix.setFromTriplets(compact.begin(), compact.end());
  return matrix;
}

Eigen::SparseMatrix<double> assemble_a(const Mesh& mesh, const VelocitySpace& velocity,
                                       const MultiplierSpace& multiplier) {
  const int nx = velocity.num_free() + multiplier.num_global();
  std::vector<Eigen::Triplet<double>> triplets;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const LocalWeakGrad lw = local_weak_devgrad(mesh, velocity, multiplier, c);
    Eigen::MatrixXd a_local = lw.grad.transpose() * (lw.gram * lw.grad);
    a_local = 0.5 * (a_local + a_local.transpose()).eval();

    const int n_u = static_cast<int>(lw.velocity_dofs.size());
    const int n_all = n_u + static_cast<int>(lw.multiplier_dofs.size());
    std::vector<int> system_index(n_all, -1);
    for (int i = 0; i < n_u; ++i) system_index[i] = velocity.free_index(lw.velocity_dofs[i]);
    for (std::size_t i = 0; i < lw.multiplier_dofs.size(); ++i)
      system_index[n_u + i] = velocity.num_free() + lw.multiplier_dofs[i];

    for (int i = 0; i < n_all; ++i) {
      if (system_index[i] < 0) continue;
      for (int j = 0; j < n_all; ++j) {
        if (system_index[j] < 0) continue;
        triplets.emplace_back(system_index[i], system_index[j], a_local(i, j));
      }
    }
  }
  return matrix_from_triplets(nx, nx, std::move(triplets));
}

Eigen::SparseMatrix<double> assemble_b(const Mesh& mesh, const VelocitySpace& velocity,
                                       const MultiplierSpace& multiplier,
                                       const PressureSpace& pressure) {
  const int nx = velocity.num_free() + multiplier.num_global();
  const QuadratureRule vol_rule = triangle_rule(kVolumeExactness);
  std::vector<Eigen::Triplet<double>> triplets;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const MappedRule vol = map_to_cell(vol_rule, mesh, c);
    const Eigen::MatrixXd div = velocity.shape_divergence(c, vol.points);
    const Eigen::MatrixXd q = pressure.basis_values(c, vol.points);
    const Eigen::MatrixXd b_local = q.transpose() * vol.weights.asDiagonal() * div;
    const std::vector<int> dofs = velocity.cell_global_dofs(c);
    for (int i = 0; i < pressure.per_cell(); ++i) {
      const int row = pressure.global_dof(c, i);
      for (std::size_t j = 0; j < dofs.size(); ++j) {
        const int col = velocity.free_index(dofs[j]);
        if (col < 0) continue;
        triplets.emplace_back(row, col, b_local(i, static_cast<int>(j)));
      }
    }
  }
  return matrix_from_triplets(pressure.num_global(), nx, std::move(triplets));
}

Eigen::VectorXd assemble_load(const Mesh& mesh, const VelocitySpace& velocity,
                              const MultiplierSpace& multiplier, const VectorField& f) {
  const QuadratureRule vol_rule = triangle_rule(kVolumeExactness);
  Eigen::VectorXd load = Eigen::VectorXd::Zero(velocity.num_free() + multiplier.num_global());
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const MappedRule vol = map_to_cell(vol_rule, mesh, c);
    Eigen::MatrixXd vx, vy;
    velocity.shape_values(c, vol.points, vx, vy);
    Eigen::VectorXd fx(vol.points.rows()), fy(vol.points.rows());
    for (Eigen::Index i = 0; i < vol.points.rows(); ++i) {
      const Eigen::Vector2d fv = f(vol.points(i, 0), vol.points(i, 1));
      fx[i] = fv.x();
      fy[i] = fv.y();
    }
    const Eigen::VectorXd local = vx.transpose() * vol.weights.cwiseProduct(fx) +
                                  vy.transpose() * vol.weights.cwiseProduct(fy);
    const std::vector<int> dofs = velocity.cell_global_dofs(c);
    for (std::size_t j = 0; j < dofs.size(); ++j) {
      const int idx = velocity.free_index(dofs[j]);
      if (idx >= 0) load[idx] += local[static_cast<int>(j)];
    }
  }
  return load;
}

}  // namespace stokesfem
