#pragma once

#include <Eigen/Dense>

#include <array>
#include <vector>

#include "stokesfem/mesh.hpp"

namespace stokesfem {

/// Dimension of P_k in two variables.
constexpr int scalar_space_dim(int k) { return k < 0 ? 0 : (k + 1) * (k + 2) / 2; }

/// Exponents (a, b) of the monomial basis of P_k, graded by total degree.
/// The first scalar_space_dim(k-1) entries form the basis of P_{k-1}.
std::vector<std::array<int, 2>> monomial_exponents(int k);

/// Values of the centered-scaled monomial basis on a cell, evaluated at
/// physical points: basis function m is xi^a eta^b with
/// xi = (x - c_T) / h_T. Returns a (npoints x dim P_k) matrix.
Eigen::MatrixXd scalar_basis_values(const Mesh& mesh, int cell, int k,
                                    const Eigen::MatrixX2d& points);

/// Values plus physical-coordinate gradients of the same basis.
void scalar_basis_values_and_gradients(const Mesh& mesh, int cell, int k,
                                       const Eigen::MatrixX2d& points,
                                       Eigen::MatrixXd& values, Eigen::MatrixXd& grad_x,
                                       Eigen::MatrixXd& grad_y);

/// The constant traceless 2x2 frame
///   E1 = [[1,0],[0,-1]], E2 = [[0,1],[0,0]], E3 = [[0,0],[1,0]].
const std::array<Eigen::Matrix2d, 3>& traceless_frame();

/// Frobenius pairings E_i : E_i of the frame (2, 1, 1); cross terms vanish.
const std::array<double, 3>& traceless_frame_weights();

/// L2(T) Gram of the frame basis {E_i phi_j} given the scalar mass matrix of
/// {phi_j}: block diagonal with blocks (2, 1, 1) * mass.
Eigen::MatrixXd traceless_gram(const Eigen::MatrixXd& scalar_mass);

/// L2(F)-orthonormal Legendre basis on an edge of length h, evaluated at
/// arclength fractions s in [0,1] measured from the lower-indexed endpoint.
/// Returns (npoints x (k+1)).
Eigen::MatrixXd edge_legendre_values(double edge_length, int k, const Eigen::VectorXd& sfrac);

}  // namespace stokesfem
