#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

#include "stokesfem/exact.hpp"
#include "stokesfem/system.hpp"

namespace stokesfem {

/// Element-local superconvergent velocity lift: u* in P_{k+1}(T;R^2) with
/// matching mean edge fluxes, elementwise divergence-free. The local pressure
/// p* is computed as part of the saddle system but kept for debugging only.
struct PostprocessedVelocity {
  int k = 0;  ///< degree of the underlying solve; u* has degree k + 1
  const Mesh* mesh = nullptr;
  std::vector<Eigen::VectorXd> coeffs;          ///< per cell, 2 * dim P_{k+1}
  std::vector<Eigen::VectorXd> debug_pressure;  ///< per cell, dim P_k - 1

  void values(int cell, const Eigen::MatrixX2d& points, Eigen::MatrixX2d& out) const;
  void gradients(int cell, const Eigen::MatrixX2d& points,
                 std::vector<Eigen::Matrix2d>& out) const;
  Eigen::VectorXd divergence(int cell, const Eigen::MatrixX2d& points) const;
};

/// Solves the local postprocessing saddle system on every cell. Throws
/// std::runtime_error naming the cell if a local system is singular.
PostprocessedVelocity postprocess(const StokesSolution& solution);

/// Error norms of one refinement level. `h` follows the grid-spacing
/// convention h = 1/n.
struct ErrorRow {
  double h = 0.0;
  double err_u = 0.0;           ///< ||u - u_h||
  double err_sigma = 0.0;       ///< ||sigma - sigma_h||
  double err_sigma_0h = 0.0;    ///< mesh-dependent norm with edge tn-traces
  double err_p = 0.0;           ///< ||p - p_h||
  double err_iu = 0.0;          ///< ||I_{k,k} u - u_h||
  double err_qsigma = 0.0;      ///< ||Q_k sigma - sigma_h||
  double err_upost = 0.0;       ///< ||u - u*||
  double err_grad_upost = 0.0;  ///< ||grad_h(u - u*)||
  bool has_postprocessed = false;
  double div_residual = 0.0;    ///< divergence_free_residual of the solve
  double tn_jump = 0.0;         ///< stress_tn_jump of the solve
  double solver_residual = 0.0;
};

ErrorRow error_norms(const StokesSolution& solution, const PostprocessedVelocity* postprocessed,
                     const ExactSolution& exact);

/// Per-level rows plus observed orders log2(e(h) / e(h/2)) between
/// consecutive halved levels.
struct ErrorReport {
  std::vector<ErrorRow> rows;

  /// Observed order of a column between rows i-1 and i; empty optional on the
  /// coarsest level.
  static std::optional<double> order(double coarse, double fine);
};

}  // namespace stokesfem
