#include "stokesfem/exact.hpp"

namespace stokesfem {

namespace {

// Factors of the stream function psi = X(x) Y(y), X = x^2 (x-1)^2, expanded.
double fac(double s) { return s * s * (s - 1.0) * (s - 1.0); }
double dfac(double s) { return 4.0 * s * s * s - 6.0 * s * s + 2.0 * s; }
double d2fac(double s) { return 12.0 * s * s - 12.0 * s + 2.0; }
double d3fac(double s) { return 24.0 * s - 12.0; }

}  // namespace

const ExactSolution& example_5_1() {
  static const ExactSolution ex = [] {
    ExactSolution e;
    e.name = "ex1";
    e.degree_velocity = 7;
    e.degree_pressure = 5;
    e.degree_forcing = 5;
    e.velocity = [](double x, double y) {
      return Eigen::Vector2d(fac(x) * dfac(y), -dfac(x) * fac(y));
    };
    e.velocity_gradient = [](double x, double y) {
      Eigen::Matrix2d g;
      g(0, 0) = dfac(x) * dfac(y);
      g(0, 1) = fac(x) * d2fac(y);
      g(1, 0) = -d2fac(x) * fac(y);
      g(1, 1) = -dfac(x) * dfac(y);
      return g;
    };
    e.pressure = [](double x, double y) {
      return -x * x * x * x * x - y * y * y * y * y + 1.0 / 3.0;
    };
    e.forcing = [](double x, double y) {
      const double lap_u1 = d2fac(x) * dfac(y) + fac(x) * d3fac(y);
      const double lap_u2 = -d3fac(x) * fac(y) - dfac(x) * d2fac(y);
      const double px = -5.0 * x * x * x * x;
      const double py = -5.0 * y * y * y * y;
      return Eigen::Vector2d(-lap_u1 - px, -lap_u2 - py);
    };
    return e;
  }();
  return ex;
}

const ExactSolution* find_example(std::string_view name) {
  if (name == "ex1") return &example_5_1();
  return nullptr;
}

std::vector<std::string> example_names() { return {"ex1"}; }

}  // namespace stokesfem
