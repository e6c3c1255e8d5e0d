#pragma once

#include <Eigen/Dense>

#include <string>
#include <string_view>
#include <vector>

#include "stokesfem/spaces.hpp"

namespace stokesfem {

/// Closed-form manufactured solution of the Stokes problem
///   -Laplace(u) - grad(p) = f,  div u = 0,  u = 0 on the boundary,
/// with the gradient sigma = grad u (traceless, since div u = 0) and the
/// forcing derived from u and p.
struct ExactSolution {
  std::string name;
  VectorField velocity;
  TensorField velocity_gradient;  ///< sigma = grad u = dev grad u
  ScalarField pressure;
  VectorField forcing;
  int degree_velocity = 0;
  int degree_pressure = 0;
  int degree_forcing = 0;

  /// Tangential trace t_F . u on an edge direction (the exact multiplier).
  double tangential_trace(const Eigen::Vector2d& tangent, double x, double y) const {
    return tangent.dot(velocity(x, y));
  }
};

/// The registered manufactured solution "ex1": u = curl(psi) with
/// psi = x^2 (x-1)^2 y^2 (y-1)^2 and p = -x^5 - y^5 + 1/3, forcing expanded
/// in closed form.
const ExactSolution& example_5_1();

/// Lookup by registry name; returns nullptr when unknown.
const ExactSolution* find_example(std::string_view name);
std::vector<std::string> example_names();

}  // namespace stokesfem
