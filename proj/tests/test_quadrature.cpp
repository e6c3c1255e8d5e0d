#include <doctest.h>

#include <cmath>

#include "stokesfem/quadrature.hpp"

using namespace stokesfem;

namespace {

// Closed-form reference-triangle integral of x^a y^b: a! b! / (a + b + 2)!.
double simplex_monomial(int a, int b) {
  double value = 1.0;
  for (int i = 1; i <= b; ++i) value *= static_cast<double>(i) / (a + i);
  for (int i = a + b + 1; i <= a + b + 2; ++i) value /= i;
  return value;
}

double integrate_reference(const QuadratureRule& rule, int a, int b) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < rule.points.rows(); ++i)
    acc += rule.weights[i] * std::pow(rule.points(i, 0), a) * std::pow(rule.points(i, 1), b);
  return acc;
}

}  // namespace

TEST_CASE("triangle rule basic integrals") {
  const QuadratureRule rule = triangle_rule(16);
  CHECK(integrate_reference(rule, 0, 0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(integrate_reference(rule, 1, 1) == doctest::Approx(1.0 / 24).epsilon(1e-14));
  // x^7 y^7 against the closed-form simplex formula.
  CHECK(integrate_reference(rule, 7, 7) ==
        doctest::Approx(simplex_monomial(7, 7)).epsilon(1e-13));
}

TEST_CASE("triangle rule exactness sweep") {
  for (int degree : {2, 5, 10, 16, 18}) {
    const QuadratureRule rule = triangle_rule(degree);
    CHECK(rule.weights.minCoeff() > 0.0);
    CHECK(rule.weights.sum() == doctest::Approx(0.5).epsilon(1e-14));
    for (int a = 0; a <= degree; ++a)
      for (int b = 0; a + b <= degree; ++b) {
        const double exact = simplex_monomial(a, b);
        CHECK(std::abs(integrate_reference(rule, a, b) - exact) <= 1e-13 * exact);
      }
  }
}

TEST_CASE("edge rule gauss exactness") {
  SUBCASE("x^2 with 2 points") {
    const QuadratureRule rule = edge_rule(2);
    CHECK(rule.points.rows() == 2);
    double acc = 0.0;
    for (Eigen::Index i = 0; i < 2; ++i)
      acc += rule.weights[i] * rule.points(i, 0) * rule.points(i, 0);
    CHECK(acc == doctest::Approx(1.0 / 3).epsilon(1e-14));
  }
  SUBCASE("x^8 with 5 points") {
    const QuadratureRule rule = edge_rule(8);
    CHECK(rule.points.rows() == 5);
    double acc = 0.0;
    for (Eigen::Index i = 0; i < 5; ++i)
      acc += rule.weights[i] * std::pow(rule.points(i, 0), 8);
    CHECK(acc == doctest::Approx(1.0 / 9).epsilon(1e-14));
  }
}

TEST_CASE("mapped rules carry the measure") {
  const Mesh mesh = Mesh::uniform_unit_square(2);
  const QuadratureRule rule = triangle_rule(4);
  double total = 0.0;
  for (int c = 0; c < mesh.num_cells(); ++c) total += map_to_cell(rule, mesh, c).weights.sum();
  CHECK(total == doctest::Approx(1.0).epsilon(1e-14));

  // Constant over the diagonal edge integrates to sqrt(2)/2 on n=2.
  const QuadratureRule erule = edge_rule(4);
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const MappedRule mapped = map_to_edge(erule, mesh, e);
    CHECK(mapped.weights.sum() == doctest::Approx(mesh.edge_length[e]).epsilon(1e-14));
  }
}

TEST_CASE("affine invariance over mapped cells") {
  // Summing mapped-cell quadrature of global monomials over the whole mesh
  // reproduces the closed-form unit-square integrals.
  const Mesh mesh = Mesh::uniform_unit_square(3);
  const QuadratureRule rule = triangle_rule(12);
  for (int a = 0; a <= 6; ++a)
    for (int b = 0; a + b <= 6; ++b) {
      double acc = 0.0;
      for (int c = 0; c < mesh.num_cells(); ++c) {
        const MappedRule mapped = map_to_cell(rule, mesh, c);
        for (Eigen::Index i = 0; i < mapped.points.rows(); ++i)
          acc += mapped.weights[i] * std::pow(mapped.points(i, 0), a) *
                 std::pow(mapped.points(i, 1), b);
      }
      const double exact = 1.0 / ((a + 1.0) * (b + 1.0));
      CHECK(std::abs(acc - exact) <= 1e-13 * exact);
    }
}
