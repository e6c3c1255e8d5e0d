#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <vector>

#include "stokesfem/spaces.hpp"

namespace stokesfem {

/// Elementwise weak deviatoric gradient: `grad` maps local (velocity,
/// multiplier) DoF values to coefficients of dev grad_w(v, mu) in the
/// traceless frame of P_k(T;T); `gram` is the frame Gram matrix M_T.
///
/// Velocity columns cover all local velocity DoFs (boundary-edge DoFs
/// included; their coefficients are zero for conforming data). Multiplier
/// columns exist for interior edges only unless `include_boundary_multipliers`
/// was requested, in which case boundary-edge columns are present with a
/// global index of -1.
struct LocalWeakGrad {
  Eigen::MatrixXd gram;
  Eigen::MatrixXd grad;
  std::vector<int> velocity_dofs;    ///< global velocity DoF per velocity column
  std::vector<int> multiplier_dofs;  ///< global multiplier DoF per trailing column
};

LocalWeakGrad local_weak_devgrad(const Mesh& mesh, const VelocitySpace& velocity,
                                 const MultiplierSpace& multiplier, int cell,
                                 bool include_boundary_multipliers = false);

/// Deterministically compacted sparse matrix: triplets are sorted by
/// (row, col) and accumulated in that order before insertion.
Eigen::SparseMatrix<double> matrix_from_triplets(int rows, int cols,
                                                 std::vector<Eigen::Triplet<double>> triplets);

/// Velocity-plus-multiplier block A = sum_T G_T^T M_T G_T over the free DoFs;
/// column/row layout is [free velocity, multipliers].
Eigen::SparseMatrix<double> assemble_a(const Mesh& mesh, const VelocitySpace& velocity,
                                       const MultiplierSpace& multiplier);

/// Divergence constraint block B[q, v] = (div v, q); rows are pressure DoFs,
/// columns span [free velocity, multipliers] with zero multiplier entries.
Eigen::SparseMatrix<double> assemble_b(const Mesh& mesh, const VelocitySpace& velocity,
                                       const MultiplierSpace& multiplier,
                                       const PressureSpace& pressure);

/// Load vector F_j = (f, phi_j) over [free velocity, multipliers].
Eigen::VectorXd assemble_load(const Mesh& mesh, const VelocitySpace& velocity,
                              const MultiplierSpace& multiplier, const VectorField& f);

}  // namespace stokesfem
