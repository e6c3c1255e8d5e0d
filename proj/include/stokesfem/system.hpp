#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <vector>

#include "stokesfem/spaces.hpp"
#include "stokesfem/weakops.hpp"

namespace stokesfem {

/// Solution of the mixed Stokes system on one mesh: velocity coefficients
/// (with zeroed boundary entries), tangential multipliers, pressure, and the
/// elementwise traceless stress sigma_h = dev grad_w(u_h, lambda_h).
struct StokesSolution {
  SpaceConfig config;
  const Mesh* mesh = nullptr;
  Eigen::VectorXd velocity;
  Eigen::VectorXd multiplier;
  Eigen::VectorXd pressure;
  std::vector<Eigen::VectorXd> stress;  ///< per-cell frame coefficients
  double residual = 0.0;                ///< relative linear-system residual
  double pressure_mean = 0.0;           ///< integral of p_h over the domain
};

/// Assembles and factors the saddle-point system
///   [[A, B^T, 0], [B, 0, m], [0, m^T, 0]]
/// with a scalar Lagrange multiplier enforcing the zero-mean pressure, then
/// recovers the elementwise stress. Throws std::runtime_error on a failed
/// factorization.
StokesSolution solve_stokes(const Mesh& mesh, SpaceConfig config, const VectorField& f);

/// Elementwise stress recovery sigma_h|_T = G_T (u_loc, lambda_loc).
std::vector<Eigen::VectorXd> recover_stress(const Mesh& mesh, const VelocitySpace& velocity,
                                            const MultiplierSpace& multiplier,
                                            const Eigen::VectorXd& velocity_coeffs,
                                            const Eigen::VectorXd& multiplier_coeffs);

/// Max over volume quadrature points of |div u_h|, normalized by
/// max |u_h| / h; machine-zero for a converged solve.
double divergence_free_residual(const StokesSolution& solution);

/// Largest interior-edge moment of the jump of t^T sigma_h n relative to the
/// one-sided moment scale; machine-zero when sigma_h is tn-continuous.
double stress_tn_jump(const StokesSolution& solution);

}  // namespace stokesfem
