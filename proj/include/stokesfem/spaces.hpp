#pragma once

#include <Eigen/Dense>

#include <functional>
#include <vector>

#include "stokesfem/mesh.hpp"
#include "stokesfem/polybasis.hpp"
#include "stokesfem/quadrature.hpp"

namespace stokesfem {

using VectorField = std::function<Eigen::Vector2d(double, double)>;
using TensorField = std::function<Eigen::Matrix2d(double, double)>;
using ScalarField = std::function<double(double, double)>;

/// Degrees of the velocity/pressure pair: l = k selects RT_k, l = k - 1
/// selects BDM_k (k >= 1).
struct SpaceConfig {
  int k = 0;
  int l = 0;

  bool raviart_thomas() const { return l == k; }
  /// Throws std::invalid_argument when (k, l) is not a supported pair.
  void validate() const;
};

/// H(div)-conforming velocity space V_{k,l}(T_h) with per-edge normal moments
/// against P_k(F) and interior moments against grad P_l + the rotational
/// complement {q in P_{k-1}(T;R^2) : q.(x - c_T) = 0}.
///
/// Shape functions are built per physical cell by inverting the local DoF
/// matrix over a centered-scaled spanning set. Edge DoFs use the global edge
/// normal and a global arclength parametrization, so no orientation signs
/// appear in the local-to-global map and normal traces are single-valued by
/// construction. DoFs on boundary edges are flagged as constrained
/// (homogeneous data).
class VelocitySpace {
 public:
  VelocitySpace(const Mesh& mesh, SpaceConfig config);

  const Mesh& mesh() const { return *mesh_; }
  SpaceConfig config() const { return config_; }
  int edge_moments() const { return config_.k + 1; }
  int interior_dofs_per_cell() const { return n_interior_; }
  int local_dim() const { return n_local_; }

  int num_global() const { return n_global_; }
  int num_free() const { return n_free_; }
  int global_edge_dof(int edge, int moment) const { return edge * edge_moments() + moment; }
  int global_interior_dof(int cell, int i) const {
    return mesh_->num_edges() * edge_moments() + cell * n_interior_ + i;
  }
  bool is_constrained(int gdof) const;
  /// Compacted index among free DoFs, or -1 when constrained.
  int free_index(int gdof) const { return free_index_[gdof]; }
  std::vector<int> cell_global_dofs(int cell) const;

  /// Shape function values at physical points inside the cell, split by
  /// component: (npoints x local_dim) each.
  void shape_values(int cell, const Eigen::MatrixX2d& points, Eigen::MatrixXd& vx,
                    Eigen::MatrixXd& vy) const;
  /// Divergence of each shape function: (npoints x local_dim).
  Eigen::MatrixXd shape_divergence(int cell, const Eigen::MatrixX2d& points) const;

  /// Evaluate the field with the given global coefficients on one cell.
  void field_values(int cell, const Eigen::VectorXd& coeffs, const Eigen::MatrixX2d& points,
                    Eigen::MatrixX2d& values) const;
  Eigen::VectorXd field_divergence(int cell, const Eigen::VectorXd& coeffs,
                                   const Eigen::MatrixX2d& points) const;

  /// Canonical interpolation I_{k,l}: evaluates the DoF functionals of a
  /// smooth field. Boundary-edge DoFs keep their computed values.
  Eigen::VectorXd interpolate(const VectorField& u) const;

  /// DoF functionals of this space applied to a smooth field, restricted to
  /// one cell (ordered like cell_global_dofs).
  Eigen::VectorXd cell_dofs_of(int cell, const VectorField& u) const;

  /// DoF functionals applied to a discrete field from another space on the
  /// same mesh (used to compare fields across RT/BDM variants).
  Eigen::VectorXd cell_dofs_of_discrete(int cell, const VelocitySpace& source,
                                        const Eigen::VectorXd& source_coeffs) const;

 private:
  void span_values(int cell, const Eigen::MatrixX2d& points, Eigen::MatrixXd& sx,
                   Eigen::MatrixXd& sy) const;
  Eigen::MatrixXd span_divergence(int cell, const Eigen::MatrixX2d& points) const;
  /// Interior DoF test fields at points: per field i, two (npoints) columns.
  void interior_test_fields(int cell, const Eigen::MatrixX2d& points, Eigen::MatrixXd& gx,
                            Eigen::MatrixXd& gy) const;
  Eigen::VectorXd dofs_from_values(int cell,
                                   const std::function<void(const Eigen::MatrixX2d&,
                                                            Eigen::MatrixX2d&)>& eval) const;

  const Mesh* mesh_;
  SpaceConfig config_;
  int n_scalar_ = 0;    // dim P_k
  int n_span_ = 0;      // local spanning-set size
  int n_interior_ = 0;  // interior DoFs per cell
  int n_local_ = 0;     // 3*(k+1) + n_interior_
  int n_global_ = 0;
  int n_free_ = 0;
  std::vector<int> free_index_;
  std::vector<Eigen::MatrixXd> shape_coeff_;  // per cell: n_span x n_local
  QuadratureRule volume_rule_;
  QuadratureRule boundary_rule_;
};

/// Tangential Lagrange multiplier space on interior edges: k+1 scalar
/// coefficients per edge against the L2(F)-orthonormal Legendre basis, acting
/// in the direction of the global edge tangent.
class MultiplierSpace {
 public:
  MultiplierSpace(const Mesh& mesh, int k);

  const Mesh& mesh() const { return *mesh_; }
  int degree() const { return k_; }
  int per_edge() const { return k_ + 1; }
  int num_global() const { return n_global_; }
  /// First global DoF of an edge, or -1 for boundary edges.
  int edge_base(int edge) const { return edge_base_[edge]; }

  /// L2(F)-projection Q_k of the tangential trace t_F . u of a smooth field.
  Eigen::VectorXd project_tangential_trace(const VectorField& u) const;

 private:
  const Mesh* mesh_;
  int k_;
  int n_global_ = 0;
  std::vector<int> edge_base_;
  QuadratureRule rule_;
};

/// Discontinuous pressure space P_l(T_h) in the centered-scaled monomial
/// basis; the global mean-zero constraint is handled by the solver.
class PressureSpace {
 public:
  PressureSpace(const Mesh& mesh, int l);

  const Mesh& mesh() const { return *mesh_; }
  int degree() const { return l_; }
  int per_cell() const { return n_per_cell_; }
  int num_global() const { return n_per_cell_ * mesh_->num_cells(); }
  int global_dof(int cell, int i) const { return cell * n_per_cell_ + i; }

  Eigen::MatrixXd basis_values(int cell, const Eigen::MatrixX2d& points) const;
  Eigen::VectorXd field_values(int cell, const Eigen::VectorXd& coeffs,
                               const Eigen::MatrixX2d& points) const;
  /// Elementwise L2-projection Q_l of a smooth scalar field.
  Eigen::VectorXd project(const ScalarField& p) const;
  /// Integral of every basis function (the pressure-mean vector).
  Eigen::VectorXd mean_vector() const;

 private:
  const Mesh* mesh_;
  int l_;
  int n_per_cell_;
  QuadratureRule rule_;
};

/// Element-local traceless tensor space P_k(T;T) spanned by {E_i phi_j}, with
/// the tangential-normal DoFs used for the interpolation I_k^tn: edge moments
/// of t^T tau n against P_k(F) and interior moments against P_{k-1}(T;T).
class StressSpace {
 public:
  StressSpace(const Mesh& mesh, int k);

  const Mesh& mesh() const { return *mesh_; }
  int degree() const { return k_; }
  int per_cell() const { return 3 * n_scalar_; }

  /// Gram matrix of the frame basis in L2(T).
  Eigen::MatrixXd gram(int cell) const;
  Eigen::MatrixXd scalar_mass(int cell) const;

  /// Evaluate a tensor field given per-cell frame coefficients.
  void field_values(int cell, const Eigen::VectorXd& cell_coeffs, const Eigen::MatrixX2d& points,
                    std::vector<Eigen::Matrix2d>& values) const;

  /// tn-interpolation I_k^tn of a smooth traceless field, per cell. Throws
  /// std::runtime_error if a local DoF matrix is singular.
  std::vector<Eigen::VectorXd> interpolate_tn(const TensorField& tau) const;

  /// Elementwise L2-projection Q_k onto P_k(T;T), per cell.
  std::vector<Eigen::VectorXd> l2_project(const TensorField& tau) const;

  /// tn-DoF functionals applied to a smooth field on one cell.
  Eigen::VectorXd cell_tn_dofs_of(int cell, const TensorField& tau) const;
  /// The local tn-DoF matrix over the frame basis (square, invertible).
  Eigen::MatrixXd tn_dof_matrix(int cell) const;

 private:
  const Mesh* mesh_;
  int k_;
  int n_scalar_;
  QuadratureRule volume_rule_;
  QuadratureRule boundary_rule_;
};

}  // namespace stokesfem
