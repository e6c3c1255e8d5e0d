#include "stokesfem/spaces.hpp"

#include <Eigen/LU>

#include <cmath>
#include <stdexcept>
#include <string>

namespace stokesfem {

namespace {

// One high-order rule reused for all assembly and DoF integrals; every
// integrand in the pipeline is polynomial of degree <= 18.
constexpr int kVolumeExactness = 18;
constexpr int kEdgeExactness = 18;

void apply_field(const VectorField& u, const Eigen::MatrixX2d& pts, Eigen::MatrixX2d& out) {
  out.resize(pts.rows(), 2);
  for (Eigen::Index i = 0; i < pts.rows(); ++i) {
    const Eigen::Vector2d v = u(pts(i, 0), pts(i, 1));
    out.row(i) = v.transpose();
  }
}

}  // namespace

void SpaceConfig::validate() const {
  if (k < 0 || k > 2)
    throw std::invalid_argument("SpaceConfig: k must be in {0, 1, 2}, got " + std::to_string(k));
  if (l != k && l != k - 1)
    throw std::invalid_argument("SpaceConfig: l must be k (RT) or k-1 (BDM), got l=" +
                                std::to_string(l) + " with k=" + std::to_string(k));
  if (l < 0)
    throw std::invalid_argument("SpaceConfig: l must be >= 0 (BDM requires k >= 1)");
}

VelocitySpace::VelocitySpace(const Mesh& mesh, SpaceConfig config)
    : mesh_(&mesh), config_(config) {
  config_.validate();
  const int k = config_.k, l = config_.l;
  n_scalar_ = scalar_space_dim(k);
  n_span_ = 2 * n_scalar_ + (config_.raviart_thomas() ? k + 1 : 0);
  n_interior_ = (scalar_space_dim(l) - 1) + scalar_space_dim(k - 2);
  n_local_ = 3 * edge_moments() + n_interior_;
  if (n_local_ != n_span_)
    throw std::runtime_error("VelocitySpace: DoF count does not match local dimension");

  volume_rule_ = triangle_rule(kVolumeExactness);
  boundary_rule_ = edge_rule(kEdgeExactness);

  n_global_ = mesh.num_edges() * edge_moments() + mesh.num_cells() * n_interior_;
  free_index_.assign(n_global_, -1);
  int next = 0;
  for (int e = 0; e < mesh.num_edges(); ++e) {
    if (mesh.edge_on_boundary[e]) continue;
    for (int r = 0; r < edge_moments(); ++r) free_index_[global_edge_dof(e, r)] = next++;
  }
  for (int c = 0; c < mesh.num_cells(); ++c)
    for (int i = 0; i < n_interior_; ++i) free_index_[global_interior_dof(c, i)] = next++;
  n_free_ = next;

  // Shape functions per cell: invert the local DoF matrix over the span.
  shape_coeff_.resize(mesh.num_cells());
  for (int c = 0; c < mesh.num_cells(); ++c) {
    Eigen::MatrixXd dof(n_local_, n_span_);
    int row = 0;
    for (int j = 0; j < 3; ++j) {
      const int e = mesh.cell_edges[c][j].edge;
      const QuadratureRule& er = boundary_rule_;
      const MappedRule mapped = map_to_edge(er, mesh, e);
      Eigen::MatrixXd sx, sy;
      span_values(c, mapped.points, sx, sy);
      const Eigen::MatrixXd legendre =
          edge_legendre_values(mesh.edge_length[e], k, er.points.col(0));
      const Eigen::Vector2d n = mesh.edge_normal[e];
      const Eigen::MatrixXd vn = n.x() * sx + n.y() * sy;  // (npts x n_span)
      for (int r = 0; r < edge_moments(); ++r, ++row)
        dof.row(row) =
            (mapped.weights.cwiseProduct(legendre.col(r)).transpose() * vn);
    }
    if (n_interior_ > 0) {
      const MappedRule mapped = map_to_cell(volume_rule_, mesh, c);
      Eigen::MatrixXd sx, sy, gx, gy;
      span_values(c, mapped.points, sx, sy);
      interior_test_fields(c, mapped.points, gx, gy);
      for (int i = 0; i < n_interior_; ++i, ++row)
        dof.row(row) = mapped.weights.cwiseProduct(gx.col(i)).transpose() * sx +
                        mapped.weights.cwiseProduct(gy.col(i)).transpose() * sy;
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(dof);
    if (!lu.isInvertible())
      throw std::runtime_error("VelocitySpace: singular local DoF matrix on cell " +
                               std::to_string(c));
    shape_coeff_[c] = lu.inverse();
  }
}

bool VelocitySpace::is_constrained(int gdof) const { return free_index_[gdof] < 0; }

std::vector<int> VelocitySpace::cell_global_dofs(int cell) const {
  std::vector<int> dofs;
  dofs.reserve(n_local_);
  for (int j = 0; j < 3; ++j) {
    const int e = mesh_->cell_edges[cell][j].edge;
    for (int r = 0; r < edge_moments(); ++r) dofs.push_back(global_edge_dof(e, r));
  }
  for (int i = 0; i < n_interior_; ++i) dofs.push_back(global_interior_dof(cell, i));
  return dofs;
}

void VelocitySpace::span_values(int cell, const Eigen::MatrixX2d& points, Eigen::MatrixXd& sx,
                                Eigen::MatrixXd& sy) const {
  const Eigen::MatrixXd scalar = scalar_basis_values(*mesh_, cell, config_.k, points);
  const Eigen::Index n = points.rows();
  sx = Eigen::MatrixXd::Zero(n, n_span_);
  sy = Eigen::MatrixXd::Zero(n, n_span_);
  sx.leftCols(n_scalar_) = scalar;
  sy.middleCols(n_scalar_, n_scalar_) = scalar;
  if (config_.raviart_thomas()) {
    // xi * q(xi), q homogeneous of degree k: q_j = xi^(k-j) eta^j.
    const Eigen::Vector2d c = mesh_->cell_centroid[cell];
    const double inv_h = 1.0 / mesh_->cell_diameter[cell];
    const Eigen::ArrayXd xi = (points.col(0).array() - c.x()) * inv_h;
    const Eigen::ArrayXd eta = (points.col(1).array() - c.y()) * inv_h;
    for (int j = 0; j <= config_.k; ++j) {
      const Eigen::ArrayXd q = xi.pow(config_.k - j) * eta.pow(j);
      sx.col(2 * n_scalar_ + j) = (xi * q).matrix();
      sy.col(2 * n_scalar_ + j) = (eta * q).matrix();
    }
  }
}

Eigen::MatrixXd VelocitySpace::span_divergence(int cell, const Eigen::MatrixX2d& points) const {
  Eigen::MatrixXd values, gx, gy;
  scalar_basis_values_and_gradients(*mesh_, cell, config_.k, points, values, gx, gy);
  const Eigen::Index n = points.rows();
  Eigen::MatrixXd div = Eigen::MatrixXd::Zero(n, n_span_);
  div.leftCols(n_scalar_) = gx;
  div.middleCols(n_scalar_, n_scalar_) = gy;
  if (config_.raviart_thomas()) {
    // div(xi q) = (2 + k) q / h_T for homogeneous q of degree k.
    const Eigen::Vector2d c = mesh_->cell_centroid[cell];
    const double inv_h = 1.0 / mesh_->cell_diameter[cell];
    const Eigen::ArrayXd xi = (points.col(0).array() - c.x()) * inv_h;
    const Eigen::ArrayXd eta = (points.col(1).array() - c.y()) * inv_h;
    for (int j = 0; j <= config_.k; ++j) {
      const Eigen::ArrayXd q = xi.pow(config_.k - j) * eta.pow(j);
      div.col(2 * n_scalar_ + j) = ((2.0 + config_.k) * inv_h) * q.matrix();
    }
  }
  return div;
}

void VelocitySpace::interior_test_fields(int cell, const Eigen::MatrixX2d& points,
                                         Eigen::MatrixXd& gx, Eigen::MatrixXd& gy) const {
  const int l = config_.l, k = config_.k;
  const Eigen::Index n = points.rows();
  gx.resize(n, n_interior_);
  gy.resize(n, n_interior_);
  int col = 0;
  if (l >= 1) {
    Eigen::MatrixXd values, dx, dy;
    scalar_basis_values_and_gradients(*mesh_, cell, l, points, values, dx, dy);
    for (int m = 1; m < scalar_space_dim(l); ++m, ++col) {  // skip the constant
      gx.col(col) = dx.col(m);
      gy.col(col) = dy.col(m);
    }
  }
  if (k >= 2) {
    // (eta, -xi) * monomials of degree <= k - 2.
    const Eigen::Vector2d c = mesh_->cell_centroid[cell];
    const double inv_h = 1.0 / mesh_->cell_diameter[cell];
    const Eigen::VectorXd xi = ((points.col(0).array() - c.x()) * inv_h).matrix();
    const Eigen::VectorXd eta = ((points.col(1).array() - c.y()) * inv_h).matrix();
    const Eigen::MatrixXd low = scalar_basis_values(*mesh_, cell, k - 2, points);
    for (int m = 0; m < scalar_space_dim(k - 2); ++m, ++col) {
      gx.col(col) = eta.cwiseProduct(low.col(m));
      gy.col(col) = -xi.cwiseProduct(low.col(m));
    }
  }
}

void VelocitySpace::shape_values(int cell, const Eigen::MatrixX2d& points, Eigen::MatrixXd& vx,
                                 Eigen::MatrixXd& vy) const {
  Eigen::MatrixXd sx, sy;
  span_values(cell, points, sx, sy);
  vx = sx * shape_coeff_[cell];
  vy = sy * shape_coeff_[cell];
}

Eigen::MatrixXd VelocitySpace::shape_divergence(int cell, const Eigen::MatrixX2d& points) const {
  return span_divergence(cell, points) * shape_coeff_[cell];
}

void VelocitySpace::field_values(int cell, const Eigen::VectorXd& coeffs,
                                 const Eigen::MatrixX2d& points, Eigen::MatrixX2d& values) const {
  const std::vector<int> dofs = cell_global_dofs(cell);
  Eigen::VectorXd local(n_local_);
  for (int i = 0; i < n_local_; ++i) local[i] = coeffs[dofs[i]];
  Eigen::MatrixXd vx, vy;
  shape_values(cell, points, vx, vy);
  values.resize(points.rows(), 2);
  values.col(0) = vx * local;
  values.col(1) = vy * local;
}

Eigen::VectorXd VelocitySpace::field_divergence(int cell, const Eigen::VectorXd& coeffs,
                                                const Eigen::MatrixX2d& points) const {
  const std::vector<int> dofs = cell_global_dofs(cell);
  Eigen::VectorXd local(n_local_);
  for (int i = 0; i < n_local_; ++i) local[i] = coeffs[dofs[i]];
  return shape_divergence(cell, points) * local;
}

Eigen::VectorXd VelocitySpace::dofs_from_values(
    int cell, const std::function<void(const Eigen::MatrixX2d&, Eigen::MatrixX2d&)>& eval) const {
  Eigen::VectorXd dofs(n_local_);
  int row = 0;
  for (int j = 0; j < 3; ++j) {
    const int e = mesh_->cell_edges[cell][j].edge;
    const MappedRule mapped = map_to_edge(boundary_rule_, *mesh_, e);
    Eigen::MatrixX2d uv;
    eval(mapped.points, uv);
    const Eigen::MatrixXd legendre =
        edge_legendre_values(mesh_->edge_length[e], config_.k, boundary_rule_.points.col(0));
    const Eigen::Vector2d n = mesh_->edge_normal[e];
    const Eigen::VectorXd un = uv.col(0) * n.x() + uv.col(1) * n.y();
    for (int r = 0; r < edge_moments(); ++r, ++row)
      dofs[row] = mapped.weights.cwiseProduct(legendre.col(r)).dot(un);
  }
  if (n_interior_ > 0) {
    const MappedRule mapped = map_to_cell(volume_rule_, *mesh_, cell);
    Eigen::MatrixX2d uv;
    eval(mapped.points, uv);
    Eigen::MatrixXd gx, gy;
    interior_test_fields(cell, mapped.points, gx, gy);
    for (int i = 0; i < n_interior_; ++i, ++row)
      dofs[row] = mapped.weights.cwiseProduct(gx.col(i)).dot(uv.col(0)) +
                  mapped.weights.cwiseProduct(gy.col(i)).dot(uv.col(1));
  }
  return dofs;
}

Eigen::VectorXd VelocitySpace::cell_dofs_of(int cell, const VectorField& u) const {
  return dofs_from_values(cell, [&](const Eigen::MatrixX2d& pts, Eigen::MatrixX2d& out) {
    apply_field(u, pts, out);
  });
}

Eigen::VectorXd VelocitySpace::cell_dofs_of_discrete(int cell, const VelocitySpace& source,
                                                     const Eigen::VectorXd& source_coeffs) const {
  return dofs_from_values(cell, [&](const Eigen::MatrixX2d& pts, Eigen::MatrixX2d& out) {
    source.field_values(cell, source_coeffs, pts, out);
  });
}

Eigen::VectorXd VelocitySpace::interpolate(const VectorField& u) const {
  Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(n_global_);
  const Mesh& mesh = *mesh_;
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const MappedRule mapped = map_to_edge(boundary_rule_, mesh, e);
    Eigen::MatrixX2d uv;
    apply_field(u, mapped.points, uv);
    const Eigen::MatrixXd legendre =
        edge_legendre_values(mesh.edge_length[e], config_.k, boundary_rule_.points.col(0));
    const Eigen::Vector2d n = mesh.edge_normal[e];
    const Eigen::VectorXd un = uv.col(0) * n.x() + uv.col(1) * n.y();
    for (int r = 0; r < edge_moments(); ++r)
      coeffs[global_edge_dof(e, r)] = mapped.weights.cwiseProduct(legendre.col(r)).dot(un);
  }
  if (n_interior_ > 0) {
    for (int c = 0; c < mesh.num_cells(); ++c) {
      const MappedRule mapped = map_to_cell(volume_rule_, mesh, c);
      Eigen::MatrixX2d uv;
      apply_field(u, mapped.points, uv);
      Eigen::MatrixXd gx, gy;
      interior_test_fields(c, mapped.points, gx, gy);
      for (int i = 0; i < n_interior_; ++i)
        coeffs[global_interior_dof(c, i)] =
            mapped.weights.cwiseProduct(gx.col(i)).dot(uv.col(0)) +
            mapped.weights.cwiseProduct(gy.col(i)).dot(uv.col(1));
    }
  }
  return coeffs;
}

MultiplierSpace::MultiplierSpace(const Mesh& mesh, int k) : mesh_(&mesh), k_(k) {
  if (k < 0) throw std::invalid_argument("MultiplierSpace: k must be >= 0");
  rule_ = edge_rule(kEdgeExactness);
  edge_base_.assign(mesh.num_edges(), -1);
  int next = 0;
  for (int e = 0; e < mesh.num_edges(); ++e) {
    if (mesh.edge_on_boundary[e]) continue;
    edge_base_[e] = next;
    next += per_edge();
  }
  n_global_ = next;
}

Eigen::VectorXd MultiplierSpace::project_tangential_trace(const VectorField& u) const {
  Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(n_global_);
  const Mesh& mesh = *mesh_;
  for (int e = 0; e < mesh.num_edges(); ++e) {
    if (edge_base_[e] < 0) continue;
    const MappedRule mapped = map_to_edge(rule_, mesh, e);
    const Eigen::MatrixXd legendre =
        edge_legendre_values(mesh.edge_length[e], k_, rule_.points.col(0));
    const Eigen::Vector2d t = mesh.edge_tangent[e];
    Eigen::VectorXd ut(mapped.points.rows());
    for (Eigen::Index i = 0; i < mapped.points.rows(); ++i)
      ut[i] = t.dot(u(mapped.points(i, 0), mapped.points(i, 1)));
    for (int r = 0; r <= k_; ++r)
      coeffs[edge_base_[e] + r] = mapped.weights.cwiseProduct(legendre.col(r)).dot(ut);
  }
  return coeffs;
}

PressureSpace::PressureSpace(const Mesh& mesh, int l)
    : mesh_(&mesh), l_(l), n_per_cell_(scalar_space_dim(l)) {
  if (l < 0) throw std::invalid_argument("PressureSpace: l must be >= 0");
  rule_ = triangle_rule(kVolumeExactness);
}

Eigen::MatrixXd PressureSpace::basis_values(int cell, const Eigen::MatrixX2d& points) const {
  return scalar_basis_values(*mesh_, cell, l_, points);
}

Eigen::VectorXd PressureSpace::field_values(int cell, const Eigen::VectorXd& coeffs,
                                            const Eigen::MatrixX2d& points) const {
  return basis_values(cell, points) * coeffs.segment(cell * n_per_cell_, n_per_cell_);
}

Eigen::VectorXd PressureSpace::project(const ScalarField& p) const {
  Eigen::VectorXd coeffs(num_global());
  for (int c = 0; c < mesh_->num_cells(); ++c) {
    const MappedRule mapped = map_to_cell(rule_, *mesh_, c);
    const Eigen::MatrixXd basis = basis_values(c, mapped.points);
    Eigen::VectorXd pv(mapped.points.rows());
    for (Eigen::Index i = 0; i < mapped.points.rows(); ++i)
      pv[i] = p(mapped.points(i, 0), mapped.points(i, 1));
    const Eigen::MatrixXd mass = basis.transpose() * mapped.weights.asDiagonal() * basis;
    const Eigen::VectorXd rhs = basis.transpose() * mapped.weights.cwiseProduct(pv);
    coeffs.segment(c * n_per_cell_, n_per_cell_) = mass.llt().solve(rhs);
  }
  return coeffs;
}

Eigen::VectorXd PressureSpace::mean_vector() const {
  Eigen::VectorXd mean(num_global());
  for (int c = 0; c < mesh_->num_cells(); ++c) {
    const MappedRule mapped = map_to_cell(rule_, *mesh_, c);
    const Eigen::MatrixXd basis = basis_values(c, mapped.points);
    mean.segment(c * n_per_cell_, n_per_cell_) = basis.transpose() * mapped.weights;
  }
  return mean;
}

StressSpace::StressSpace(const Mesh& mesh, int k)
    : mesh_(&mesh), k_(k), n_scalar_(scalar_space_dim(k)) {
  if (k < 0) throw std::invalid_argument("StressSpace: k must be >= 0");
  volume_rule_ = triangle_rule(kVolumeExactness);
  boundary_rule_ = edge_rule(kEdgeExactness);
}

Eigen::MatrixXd StressSpace::scalar_mass(int cell) const {
  const MappedRule mapped = map_to_cell(volume_rule_, *mesh_, cell);
  const Eigen::MatrixXd basis = scalar_basis_values(*mesh_, cell, k_, mapped.points);
  return basis.transpose() * mapped.weights.asDiagonal() * basis;
}

Eigen::MatrixXd StressSpace::gram(int cell) const { return traceless_gram(scalar_mass(cell)); }

void StressSpace::field_values(int cell, const Eigen::VectorXd& cell_coeffs,
                               const Eigen::MatrixX2d& points,
                               std::vector<Eigen::Matrix2d>& values) const {
  const Eigen::MatrixXd basis = scalar_basis_values(*mesh_, cell, k_, points);
  const auto& frame = traceless_frame();
  values.assign(points.rows(), Eigen::Matrix2d::Zero());
  for (int a = 0; a < 3; ++a) {
    const Eigen::VectorXd scalar = basis * cell_coeffs.segment(a * n_scalar_, n_scalar_);
    for (Eigen::Index i = 0; i < points.rows(); ++i) values[i] += scalar[i] * frame[a];
  }
}

Eigen::MatrixXd StressSpace::tn_dof_matrix(int cell) const {
  const Mesh& mesh = *mesh_;
  const int m = n_scalar_;
  const int n_lo = scalar_space_dim(k_ - 1);
  Eigen::MatrixXd dof(3 * m, 3 * m);
  const auto& frame = traceless_frame();
  int row = 0;
  for (int j = 0; j < 3; ++j) {
    const int e = mesh.cell_edges[cell][j].edge;
    const MappedRule mapped = map_to_edge(boundary_rule_, mesh, e);
    const Eigen::MatrixXd basis = scalar_basis_values(mesh, cell, k_, mapped.points);
    const Eigen::MatrixXd legendre =
        edge_legendre_values(mesh.edge_length[e], k_, boundary_rule_.points.col(0));
    const Eigen::Vector2d t = mesh.edge_tangent[e];
    const Eigen::Vector2d n = mesh.edge_normal[e];
    // Edge moments of phi_i against each Legendre mode, scaled by t^T E_a n.
    Eigen::MatrixXd moments(k_ + 1, m);
    for (int r = 0; r <= k_; ++r)
      moments.row(r) = mapped.weights.cwiseProduct(legendre.col(r)).transpose() * basis;
    for (int r = 0; r <= k_; ++r, ++row)
      for (int a = 0; a < 3; ++a) {
        const double tEn = t.dot(frame[a] * n);
        dof.row(row).segment(a * m, m) = tEn * moments.row(r);
      }
  }
  if (n_lo > 0) {
    const Eigen::MatrixXd mass = scalar_mass(cell);
    const auto& w = traceless_frame_weights();
    // Interior moments against E_c times the P_{k-1} monomials (the leading
    // block of the P_k basis).
    for (int c2 = 0; c2 < 3; ++c2)
      for (int j2 = 0; j2 < n_lo; ++j2, ++row) {
        dof.row(row).setZero();
        dof.row(row).segment(c2 * m, m) = w[c2] * mass.row(j2);
      }
  }
  return dof;
}

Eigen::VectorXd StressSpace::cell_tn_dofs_of(int cell, const TensorField& tau) const {
  const Mesh& mesh = *mesh_;
  const int m = n_scalar_;
  const int n_lo = scalar_space_dim(k_ - 1);
  Eigen::VectorXd dofs(3 * m);
  const auto& frame = traceless_frame();
  int row = 0;
  for (int j = 0; j < 3; ++j) {
    const int e = mesh.cell_edges[cell][j].edge;
    const MappedRule mapped = map_to_edge(boundary_rule_, mesh, e);
    const Eigen::MatrixXd legendre =
        edge_legendre_values(mesh.edge_length[e], k_, boundary_rule_.points.col(0));
    const Eigen::Vector2d t = mesh.edge_tangent[e];
    const Eigen::Vector2d n = mesh.edge_normal[e];
    Eigen::VectorXd tn(mapped.points.rows());
    for (Eigen::Index i = 0; i < mapped.points.rows(); ++i)
      tn[i] = t.dot(tau(mapped.points(i, 0), mapped.points(i, 1)) * n);
    for (int r = 0; r <= k_; ++r, ++row)
      dofs[row] = mapped.weights.cwiseProduct(legendre.col(r)).dot(tn);
  }
  if (n_lo > 0) {
    const MappedRule mapped = map_to_cell(volume_rule_, mesh, cell);
    const Eigen::MatrixXd basis = scalar_basis_values(mesh, cell, k_ - 1, mapped.points);
    for (int c2 = 0; c2 < 3; ++c2) {
      Eigen::VectorXd contraction(mapped.points.rows());
      for (Eigen::Index i = 0; i < mapped.points.rows(); ++i)
        contraction[i] =
            (tau(mapped.points(i, 0), mapped.points(i, 1)).array() * frame[c2].array()).sum();
      for (int j2 = 0; j2 < n_lo; ++j2, ++row)
        dofs[row] = mapped.weights.cwiseProduct(basis.col(j2)).dot(contraction);
    }
  }
  return dofs;
}

std::vector<Eigen::VectorXd> StressSpace::interpolate_tn(const TensorField& tau) const {
  std::vector<Eigen::VectorXd> coeffs(mesh_->num_cells());
  for (int c = 0; c < mesh_->num_cells(); ++c) {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(tn_dof_matrix(c));
    if (!lu.isInvertible())
      throw std::runtime_error("StressSpace: singular tn-DoF matrix on cell " + std::to_string(c));
    coeffs[c] = lu.solve(cell_tn_dofs_of(c, tau));
  }
  return coeffs;
}

std::vector<Eigen::VectorXd> StressSpace::l2_project(const TensorField& tau) const {
  std::vector<Eigen::VectorXd> coeffs(mesh_->num_cells());
  const auto& frame = traceless_frame();
  for (int c = 0; c < mesh_->num_cells(); ++c) {
    const MappedRule mapped = map_to_cell(volume_rule_, *mesh_, c);
    const Eigen::MatrixXd basis = scalar_basis_values(*mesh_, c, k_, mapped.points);
    Eigen::VectorXd rhs(3 * n_scalar_);
    for (int a = 0; a < 3; ++a) {
      Eigen::VectorXd contraction(mapped.points.rows());
      for (Eigen::Index i = 0; i < mapped.points.rows(); ++i)
        contraction[i] =
            (tau(mapped.points(i, 0), mapped.points(i, 1)).array() * frame[a].array()).sum();
      rhs.segment(a * n_scalar_, n_scalar_) =
          basis.transpose() * mapped.weights.cwiseProduct(contraction);
    }
    coeffs[c] = gram(c).llt().solve(rhs);
  }
  return coeffs;
}

}  // namespace stokesfem
