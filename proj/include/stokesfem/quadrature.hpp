#pragma once

#include <Eigen/Dense>

#include "stokesfem/mesh.hpp"

namespace stokesfem {

/// Quadrature rule on the reference triangle {x, y >= 0, x + y <= 1} or the
/// reference interval [0,1]. `exactness` is the highest polynomial degree the
/// rule integrates exactly.
struct QuadratureRule {
  Eigen::MatrixX2d points;
  Eigen::VectorXd weights;
  int exactness = 0;
};

/// Positive-weight rule on the reference triangle exact to the requested
/// degree, built from a Duffy-transformed Gauss product.
QuadratureRule triangle_rule(int exactness);

/// Gauss-Legendre rule on [0,1] with ceil((exactness+1)/2) points.
QuadratureRule edge_rule(int exactness);

/// A rule pushed to a physical cell or edge; weights carry the measure.
struct MappedRule {
  Eigen::MatrixX2d points;
  Eigen::VectorXd weights;
};

MappedRule map_to_cell(const QuadratureRule& rule, const Mesh& mesh, int cell);

/// Edge points are traversed from the lower-indexed endpoint to the higher
/// one, matching the global edge orientation.
MappedRule map_to_edge(const QuadratureRule& rule, const Mesh& mesh, int edge);

/// Gauss-Legendre nodes and weights on [-1,1].
void gauss_legendre(int npts, Eigen::VectorXd& nodes, Eigen::VectorXd& weights);

}  // namespace stokesfem
