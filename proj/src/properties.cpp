#include "stokesfem/properties.hpp"

#include <json.hpp>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include <cmath>
#include <random>
#include <sstream>

namespace stokesfem {

namespace {

// Bivariate polynomial with dense coefficients c(i, j) x^i y^j; the analytic
// derivatives make it an implementation-independent oracle for the identity
// checks.
struct Poly2 {
  Eigen::MatrixXd c;

  double operator()(double x, double y) const {
    double acc = 0.0;
    double xi = 1.0;
    for (Eigen::Index i = 0; i < c.rows(); ++i) {
      double yj = 1.0;
      for (Eigen::Index j = 0; j < c.cols(); ++j) {
        acc += c(i, j) * xi * yj;
        yj *= y;
      }
      xi *= x;
    }
    return acc;
  }

  Poly2 dx() const {
    Poly2 d;
    d.c = Eigen::MatrixXd::Zero(std::max<Eigen::Index>(c.rows() - 1, 1), c.cols());
    for (Eigen::Index i = 1; i < c.rows(); ++i) d.c.row(i - 1) = i * c.row(i);
    return d;
  }

  Poly2 dy() const {
    Poly2 d;
    d.c = Eigen::MatrixXd::Zero(c.rows(), std::max<Eigen::Index>(c.cols() - 1, 1));
    for (Eigen::Index j = 1; j < c.cols(); ++j) d.c.col(j - 1) = j * c.col(j);
    return d;
  }

  static Poly2 random(int degree, std::mt19937& rng) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Poly2 p;
    p.c = Eigen::MatrixXd::Zero(degree + 1, degree + 1);
    for (int i = 0; i <= degree; ++i)
      for (int j = 0; j <= degree - i; ++j) p.c(i, j) = dist(rng);
    return p;
  }
};

struct PolyVectorField {
  Poly2 x, y;

  VectorField field() const {
    return [*this](double px, double py) { return Eigen::Vector2d(x(px, py), y(px, py)); };
  }
  TensorField gradient() const {
    const Poly2 xx = x.dx(), xy = x.dy(), yx = y.dx(), yy = y.dy();
    return [=](double px, double py) {
      Eigen::Matrix2d g;
      g << xx(px, py), xy(px, py), yx(px, py), yy(px, py);
      return g;
    };
  }
  TensorField dev_gradient() const {
    const TensorField g = gradient();
    return [g](double px, double py) {
      const Eigen::Matrix2d m = g(px, py);
      return (m - 0.5 * m.trace() * Eigen::Matrix2d::Identity()).eval();
    };
  }
  ScalarField divergence() const {
    const Poly2 xx = x.dx(), yy = y.dy();
    return [=](double px, double py) { return xx(px, py) + yy(px, py); };
  }
};

class Suite {
 public:
  explicit Suite(const RunConfig& config) : config_(config) {}

  std::vector<PropertyResult> run() {
    for (int n : {2, 4}) {
      Mesh mesh = Mesh::uniform_unit_square(n);
      if (config_.debug_flip_normals) mesh.flip_normals_for_testing();
      mesh_checks(mesh, n);
      quadrature_checks(mesh, n);
      basis_checks(mesh, n);
      space_checks(mesh, n);
      weakop_checks(mesh, n);
      solve_checks(mesh, n);
    }
    exact_checks();
    return results_;
  }

 private:
  void add(const std::string& name, int n, bool pass, const std::string& detail) {
    results_.push_back({name + " [n=" + std::to_string(n) + ",k=" + std::to_string(config_.k) +
                            ",l=" + std::to_string(config_.l) + "]",
                        pass, detail});
  }
  void add(const std::string& name, bool pass, const std::string& detail) {
    results_.push_back({name, pass, detail});
  }
  static std::string num(double v) {
    std::ostringstream os;
    os.precision(3);
    os << v;
    return os.str();
  }

  void mesh_checks(const Mesh& mesh, int n) {
    const int v = mesh.num_vertices(), e = mesh.num_edges(), c = mesh.num_cells();
    add("mesh.euler_characteristic", n, v - e + c == 1,
        "V-E+C=" + std::to_string(v - e + c));
    const bool counts = v == (n + 1) * (n + 1) && c == 2 * n * n && e == 3 * n * n + 2 * n &&
                        mesh.num_boundary_edges() == 4 * n;
    add("mesh.entity_counts", n, counts,
        "V=" + std::to_string(v) + " E=" + std::to_string(e) + " C=" + std::to_string(c));

    bool adjacency = true;
    for (int i = 0; i < e; ++i) {
      const bool boundary = mesh.edge_on_boundary[i];
      const int adj = (mesh.edge_cells[i][1] >= 0) ? 2 : 1;
      if ((boundary && adj != 1) || (!boundary && adj != 2)) adjacency = false;
    }
    add("mesh.edge_adjacency", n, adjacency, "");

    double worst_sign = 0.0, worst_tangent = 0.0, worst_closure = 0.0;
    bool ccw = true;
    for (int ci = 0; ci < c; ++ci) {
      if (mesh.cell_area[ci] <= 0.0) ccw = false;
      Eigen::Vector2d closure = Eigen::Vector2d::Zero();
      for (int j = 0; j < 3; ++j) {
        const auto ce = mesh.cell_edges[ci][j];
        const Eigen::Vector2d& a = mesh.vertices[mesh.cells[ci][j]];
        const Eigen::Vector2d& b = mesh.vertices[mesh.cells[ci][(j + 1) % 3]];
        const Eigen::Vector2d t = (b - a).normalized();
        const Eigen::Vector2d outward(t.y(), -t.x());
        worst_sign = std::max(
            worst_sign, (outward - ce.sign * mesh.edge_normal[ce.edge]).norm());
        closure += mesh.edge_length[ce.edge] * ce.sign * mesh.edge_normal[ce.edge];
      }
      worst_closure = std::max(worst_closure, closure.norm());
    }
    for (int i = 0; i < e; ++i) {
      const Eigen::Vector2d rot(-mesh.edge_normal[i].y(), mesh.edge_normal[i].x());
      worst_tangent = std::max(worst_tangent, (rot - mesh.edge_tangent[i]).norm());
      worst_tangent = std::max(worst_tangent, std::abs(mesh.edge_normal[i].norm() - 1.0));
    }
    add("mesh.outward_normal_sign", n, worst_sign <= 1e-12, num(worst_sign));
    add("mesh.tangent_is_rotated_normal", n, worst_tangent <= 1e-12, num(worst_tangent));
    add("mesh.cells_counterclockwise", n, ccw, "");
    add("mesh.cell_normal_closure", n, worst_closure <= 1e-12, num(worst_closure));

    bool opposite = true;
    for (int i = 0; i < e; ++i) {
      if (mesh.edge_on_boundary[i]) continue;
      int s0 = 0, s1 = 0;
      for (int side = 0; side < 2; ++side) {
        const int ci = mesh.edge_cells[i][side];
        for (int j = 0; j < 3; ++j)
          if (mesh.cell_edges[ci][j].edge == i) (side == 0 ? s0 : s1) = mesh.cell_edges[ci][j].sign;
      }
      if (s0 + s1 != 0) opposite = false;
    }
    add("mesh.interior_edge_opposite_signs", n, opposite, "");

    const Mesh fine = Mesh::uniform_unit_square(2 * n);
    add("mesh.refinement_scaling", n, fine.num_cells() == 4 * mesh.num_cells(),
        std::to_string(fine.num_cells()) + " vs 4*" + std::to_string(mesh.num_cells()));
  }

  void quadrature_checks(const Mesh& mesh, int n) {
    // Reference-triangle monomials against the closed form a! b! / (a+b+2)!.
    const QuadratureRule rule = triangle_rule(18);
    double worst = 0.0;
    for (int a = 0; a + 0 <= 18; ++a)
      for (int b = 0; a + b <= 18; ++b) {
        double exact = 1.0;
        for (int i = 1; i <= b; ++i) exact *= static_cast<double>(i) / (a + i);
        for (int i = a + b + 1; i <= a + b + 2; ++i) exact /= i;
        double got = 0.0;
        for (Eigen::Index q = 0; q < rule.points.rows(); ++q)
          got += rule.weights[q] * std::pow(rule.points(q, 0), a) * std::pow(rule.points(q, 1), b);
        worst = std::max(worst, std::abs(got - exact) / exact);
      }
    add("quadrature.triangle_monomial_exactness", n, worst <= 1e-13, num(worst));

    const QuadratureRule erule = edge_rule(18);
    double eworst = 0.0;
    for (int d = 0; d <= 18; ++d) {
      double got = 0.0;
      for (Eigen::Index q = 0; q < erule.points.rows(); ++q)
        got += erule.weights[q] * std::pow(erule.points(q, 0), d);
      eworst = std::max(eworst, std::abs(got - 1.0 / (d + 1)) * (d + 1));
    }
    add("quadrature.edge_monomial_exactness", n, eworst <= 1e-13, num(eworst));

    bool positive = rule.weights.minCoeff() > 0.0 && erule.weights.minCoeff() > 0.0;
    const double wsum = std::abs(rule.weights.sum() - 0.5) + std::abs(erule.weights.sum() - 1.0);
    add("quadrature.weights_positive_and_normalized", n, positive && wsum <= 1e-13, num(wsum));

    // Affine invariance: global monomials summed over mapped cells reproduce
    // the closed-form unit-square integrals.
    double aworst = 0.0;
    for (int a = 0; a + 0 <= 8; ++a)
      for (int b = 0; a + b <= 8; ++b) {
        double got = 0.0;
        for (int c = 0; c < mesh.num_cells(); ++c) {
          const MappedRule vol = map_to_cell(rule, mesh, c);
          for (Eigen::Index q = 0; q < vol.points.rows(); ++q)
            got += vol.weights[q] * std::pow(vol.points(q, 0), a) * std::pow(vol.points(q, 1), b);
        }
        const double exact = 1.0 / ((a + 1.0) * (b + 1.0));
        aworst = std::max(aworst, std::abs(got - exact) / exact);
      }
    add("quadrature.affine_invariance", n, aworst <= 1e-13, num(aworst));
  }

  void basis_checks(const Mesh& mesh, int n) {
    const int k = config_.k;
    // Vandermonde at the principal lattice of each cell.
    const int m = scalar_space_dim(k);
    double worst_cond = 0.0;
    for (int c = 0; c < mesh.num_cells(); ++c) {
      Eigen::MatrixX2d pts(m, 2);
      int row = 0;
      for (int i = 0; i <= k; ++i)
        for (int j = 0; j <= k - i; ++j, ++row) {
          const double a = (k == 0) ? 1.0 / 3.0 : static_cast<double>(i) / k;
          const double b = (k == 0) ? 1.0 / 3.0 : static_cast<double>(j) / k;
          pts.row(row) = (mesh.vertices[mesh.cells[c][0]] +
                          a * (mesh.vertices[mesh.cells[c][1]] - mesh.vertices[mesh.cells[c][0]]) +
                          b * (mesh.vertices[mesh.cells[c][2]] - mesh.vertices[mesh.cells[c][0]]))
                             .transpose();
        }
      const Eigen::MatrixXd vand = scalar_basis_values(mesh, c, k, pts);
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(vand);
      const double cond = svd.singularValues()(0) / svd.singularValues().tail(1)(0);
      worst_cond = std::max(worst_cond, cond);
    }
    add("basis.vandermonde_conditioning", n, std::isfinite(worst_cond) && worst_cond < 100.0,
        "cond=" + num(worst_cond));

    // Central finite differences at random interior points.
    std::mt19937 rng(1234);
    std::uniform_real_distribution<double> unif(0.3, 0.7);
    std::uniform_int_distribution<int> cell_dist(0, mesh.num_cells() - 1);
    double worst_fd = 0.0;
    const double step = 1e-4;
    for (int trial = 0; trial < 10; ++trial) {
      const int c = cell_dist(rng);
      const Eigen::Vector2d p = mesh.vertices[mesh.cells[c][0]] +
                                unif(rng) * 0.5 *
                                    (mesh.cell_centroid[c] - mesh.vertices[mesh.cells[c][0]]);
      Eigen::MatrixX2d pts(5, 2);
      pts.row(0) = p.transpose();
      pts.row(1) = Eigen::Vector2d(p.x() + step, p.y()).transpose();
      pts.row(2) = Eigen::Vector2d(p.x() - step, p.y()).transpose();
      pts.row(3) = Eigen::Vector2d(p.x(), p.y() + step).transpose();
      pts.row(4) = Eigen::Vector2d(p.x(), p.y() - step).transpose();
      Eigen::MatrixXd values, gx, gy;
      scalar_basis_values_and_gradients(mesh, c, std::max(k, 2), pts, values, gx, gy);
      for (Eigen::Index j = 0; j < values.cols(); ++j) {
        const double fdx = (values(1, j) - values(2, j)) / (2 * step);
        const double fdy = (values(3, j) - values(4, j)) / (2 * step);
        worst_fd = std::max({worst_fd, std::abs(fdx - gx(0, j)), std::abs(fdy - gy(0, j))});
      }
    }
    add("basis.gradient_consistency", n, worst_fd <= 1e-7, num(worst_fd));

    // Frame Gram block structure: E1:E1 = 2, E2:E2 = E3:E3 = 1, cross terms 0.
    const StressSpace stress(mesh, k);
    const Eigen::MatrixXd mass = stress.scalar_mass(0);
    const Eigen::MatrixXd gram = stress.gram(0);
    Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(3 * m, 3 * m);
    expected.block(0, 0, m, m) = 2 * mass;
    expected.block(m, m, m, m) = mass;
    expected.block(2 * m, 2 * m, m, m) = mass;
    const double gerr = (gram - expected).cwiseAbs().maxCoeff();
    bool traceless = true;
    for (const auto& e : traceless_frame())
      if (std::abs(e.trace()) > 0.0) traceless = false;
    add("basis.traceless_gram_structure", n, gerr == 0.0 && traceless, num(gerr));
  }

  void space_checks(const Mesh& mesh, int n) {
    const SpaceConfig sc{config_.k, config_.l};
    const int k = config_.k;
    const VelocitySpace velocity(mesh, sc);
    const MultiplierSpace multiplier(mesh, k);
    const PressureSpace pressure(mesh, config_.l);
    const StressSpace stress(mesh, k);
    std::mt19937 rng(99);

    // Unisolvence: DoF functionals of the built shape functions, recomputed by
    // quadrature from pointwise shape values, give the identity.
    double worst = 0.0;
    for (int c = 0; c < mesh.num_cells(); ++c) {
      for (int j = 0; j < velocity.local_dim(); ++j) {
        Eigen::VectorXd unit = Eigen::VectorXd::Zero(velocity.num_global());
        const std::vector<int> dofs = velocity.cell_global_dofs(c);
        unit[dofs[j]] = 1.0;
        const Eigen::VectorXd applied = velocity.cell_dofs_of_discrete(c, velocity, unit);
        Eigen::VectorXd expected = Eigen::VectorXd::Zero(velocity.local_dim());
        expected[j] = 1.0;
        worst = std::max(worst, (applied - expected).cwiseAbs().maxCoeff());
      }
    }
    add("spaces.velocity_unisolvence", n, worst <= 1e-11, num(worst));

    // Stress reproduction: interpolating a random member of P_k(T;T) returns
    // its own coefficients.
    double srep = 0.0;
    {
      std::uniform_real_distribution<double> dist(-1.0, 1.0);
      Eigen::VectorXd coeff(stress.per_cell());
      for (int i = 0; i < coeff.size(); ++i) coeff[i] = dist(rng);
      for (int c = 0; c < std::min(mesh.num_cells(), 6); ++c) {
        TensorField tau = [&stress, &coeff, c](double x, double y) {
          Eigen::MatrixX2d pt(1, 2);
          pt << x, y;
          std::vector<Eigen::Matrix2d> vals;
          stress.field_values(c, coeff, pt, vals);
          return vals[0];
        };
        const Eigen::MatrixXd dof_matrix = stress.tn_dof_matrix(c);
        const Eigen::VectorXd dofs = stress.cell_tn_dofs_of(c, tau);
        const Eigen::VectorXd recovered = Eigen::FullPivLU<Eigen::MatrixXd>(dof_matrix).solve(dofs);
        srep = std::max(srep, (recovered - coeff).cwiseAbs().maxCoeff());
      }
    }
    add("spaces.stress_unisolvence", n, srep <= 1e-11, num(srep));

    // Normal-trace conformity of a random coefficient vector.
    {
      std::uniform_real_distribution<double> dist(-1.0, 1.0);
      Eigen::VectorXd coeffs(velocity.num_global());
      for (int i = 0; i < coeffs.size(); ++i) coeffs[i] = dist(rng);
      const QuadratureRule erule = edge_rule(10);
      double jump = 0.0, scale = 1.0;
      for (int e = 0; e < mesh.num_edges(); ++e) {
        if (mesh.edge_on_boundary[e]) continue;
        const MappedRule edge = map_to_edge(erule, mesh, e);
        Eigen::MatrixX2d v0, v1;
        velocity.field_values(mesh.edge_cells[e][0], coeffs, edge.points, v0);
        velocity.field_values(mesh.edge_cells[e][1], coeffs, edge.points, v1);
        const Eigen::Vector2d nf = mesh.edge_normal[e];
        const Eigen::VectorXd d =
            (v0.col(0) - v1.col(0)) * nf.x() + (v0.col(1) - v1.col(1)) * nf.y();
        jump = std::max(jump, d.cwiseAbs().maxCoeff());
        scale = std::max({scale, v0.cwiseAbs().maxCoeff(), v1.cwiseAbs().maxCoeff()});
      }
      add("spaces.normal_trace_conformity", n, jump / scale <= 1e-11, num(jump / scale));
    }

    // Commuting identity div(I v) = Q_l(div v) for random polynomial fields.
    {
      const QuadratureRule vrule = triangle_rule(18);
      double werr = 0.0;
      for (int trial = 0; trial < 20; ++trial) {
        const PolyVectorField v{Poly2::random(k + 2, rng), Poly2::random(k + 2, rng)};
        const Eigen::VectorXd iv = velocity.interpolate(v.field());
        const Eigen::VectorXd qdiv = pressure.project(v.divergence());
        double err2 = 0.0, scale2 = 0.0;
        for (int c = 0; c < mesh.num_cells(); ++c) {
          const MappedRule vol = map_to_cell(vrule, mesh, c);
          const Eigen::VectorXd div_iv = velocity.field_divergence(c, iv, vol.points);
          const Eigen::VectorXd qd = pressure.field_values(c, qdiv, vol.points);
          err2 += vol.weights.dot((div_iv - qd).cwiseAbs2());
          scale2 += vol.weights.dot(qd.cwiseAbs2());
        }
        werr = std::max(werr, std::sqrt(err2) / std::max(1.0, std::sqrt(scale2)));
      }
      add("spaces.divergence_commutes", n, werr <= 1e-10, num(werr));
    }

    // div of every velocity shape function lies in the pressure space.
    {
      const QuadratureRule vrule = triangle_rule(18);
      double derr = 0.0;
      for (int c = 0; c < std::min(mesh.num_cells(), 6); ++c) {
        const MappedRule vol = map_to_cell(vrule, mesh, c);
        const Eigen::MatrixXd div = velocity.shape_divergence(c, vol.points);
        const Eigen::MatrixXd q = pressure.basis_values(c, vol.points);
        const Eigen::MatrixXd mass = q.transpose() * vol.weights.asDiagonal() * q;
        const Eigen::MatrixXd proj =
            q * mass.llt().solve(q.transpose() * vol.weights.asDiagonal() * div);
        derr = std::max(derr, (proj - div).cwiseAbs().maxCoeff());
      }
      add("spaces.pressure_div_compatibility", n, derr <= 1e-12, num(derr));
    }
  }

  // Direct-quadrature weak deviatoric gradient of an analytic pair (v, t.v):
  // independent of the discrete spaces.
  static Eigen::VectorXd weak_grad_direct(const Mesh& mesh, const StressSpace& stress, int cell,
                                          const PolyVectorField& v) {
    const int k = stress.degree();
    const int m = scalar_space_dim(k);
    const QuadratureRule vrule = triangle_rule(18);
    const QuadratureRule erule = edge_rule(18);
    const auto& frame = traceless_frame();
    const MappedRule vol = map_to_cell(vrule, mesh, cell);
    Eigen::MatrixXd phi, gx, gy;
    scalar_basis_values_and_gradients(mesh, cell, k, vol.points, phi, gx, gy);

    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(3 * m);
    for (Eigen::Index q = 0; q < vol.points.rows(); ++q) {
      const Eigen::Vector2d val = v.field()(vol.points(q, 0), vol.points(q, 1));
      for (int a = 0; a < 3; ++a)
        for (int i = 0; i < m; ++i) {
          const Eigen::Vector2d div_tau(frame[a](0, 0) * gx(q, i) + frame[a](0, 1) * gy(q, i),
                                        frame[a](1, 0) * gx(q, i) + frame[a](1, 1) * gy(q, i));
          rhs[a * m + i] -= vol.weights[q] * val.dot(div_tau);
        }
    }
    for (int j = 0; j < 3; ++j) {
      const int e = mesh.cell_edges[cell][j].edge;
      const int sign = mesh.cell_edges[cell][j].sign;
      const MappedRule edge = map_to_edge(erule, mesh, e);
      const Eigen::MatrixXd ephi = scalar_basis_values(mesh, cell, k, edge.points);
      const Eigen::Vector2d nf = mesh.edge_normal[e];
      const Eigen::Vector2d tf = mesh.edge_tangent[e];
      for (Eigen::Index q = 0; q < edge.points.rows(); ++q) {
        const Eigen::Vector2d val = v.field()(edge.points(q, 0), edge.points(q, 1));
        const double vn = val.dot(nf), vt = val.dot(tf);
        for (int a = 0; a < 3; ++a) {
          const double nEn = nf.dot(frame[a] * nf);
          const double tEn = tf.dot(frame[a] * nf);
          for (int i = 0; i < m; ++i)
            rhs[a * m + i] += edge.weights[q] * ephi(q, i) * sign * (vn * nEn + vt * tEn);
        }
      }
    }
    return stress.gram(cell).llt().solve(rhs);
  }

  void weakop_checks(const Mesh& mesh, int n) {
    const int k = config_.k;
    const VelocitySpace velocity(mesh, SpaceConfig{config_.k, config_.l});
    const MultiplierSpace multiplier(mesh, k);
    const StressSpace stress(mesh, k);
    std::mt19937 rng(2024);

    // Elementwise identity dev grad_w(v, Pi_F v)|_T = Q_{k,T}(dev grad v) by
    // direct quadrature.
    {
      double worst = 0.0;
      for (int trial = 0; trial < 20; ++trial) {
        const PolyVectorField v{Poly2::random(k + 1, rng), Poly2::random(k + 1, rng)};
        const std::vector<Eigen::VectorXd> proj = stress.l2_project(v.dev_gradient());
        for (int c = 0; c < mesh.num_cells(); ++c) {
          const Eigen::VectorXd direct = weak_grad_direct(mesh, stress, c, v);
          const Eigen::VectorXd diff = direct - proj[c];
          const double scale = std::max(1.0, proj[c].cwiseAbs().maxCoeff());
          worst = std::max(worst, diff.cwiseAbs().maxCoeff() / scale);
        }
      }
      add("weakops.elementwise_projection_identity", n, worst <= 1e-10, num(worst));
    }

    // Discrete route through I_{k,k} and G_T reproduces the same projection
    // (the commuting property of the weak gradient with interpolation).
    {
      const VelocitySpace rt(mesh, SpaceConfig{k, k});
      double worst = 0.0;
      for (int trial = 0; trial < 20; ++trial) {
        const PolyVectorField v{Poly2::random(k + 1, rng), Poly2::random(k + 1, rng)};
        const Eigen::VectorXd iv = rt.interpolate(v.field());
        const Eigen::VectorXd qmu = multiplier.project_tangential_trace(v.field());
        const std::vector<Eigen::VectorXd> proj = stress.l2_project(v.dev_gradient());
        for (int c = 0; c < mesh.num_cells(); ++c) {
          const LocalWeakGrad lw = local_weak_devgrad(mesh, rt, multiplier, c, true);
          Eigen::VectorXd local(lw.velocity_dofs.size() + lw.multiplier_dofs.size());
          int i = 0;
          for (int g : lw.velocity_dofs) local[i++] = iv[g];
          for (std::size_t mcol = 0; mcol < lw.multiplier_dofs.size(); ++mcol) {
            const int g = lw.multiplier_dofs[mcol];
            if (g >= 0) {
              local[i++] = qmu[g];
            } else {
              // Boundary edges carry no global multiplier; use the projected
              // tangential trace of v on that edge directly.
              const int local_edge = static_cast<int>(mcol) / (k + 1);
              const int r = static_cast<int>(mcol) % (k + 1);
              const int e = mesh.cell_edges[c][local_edge].edge;
              const MappedRule er = map_to_edge(edge_rule(18), mesh, e);
              const Eigen::MatrixXd leg =
                  edge_legendre_values(mesh.edge_length[e], k, edge_rule(18).points.col(0));
              double moment = 0.0;
              for (Eigen::Index q = 0; q < er.points.rows(); ++q)
                moment += er.weights[q] * leg(q, r) *
                          mesh.edge_tangent[e].dot(v.field()(er.points(q, 0), er.points(q, 1)));
              local[i++] = moment;
            }
          }
          const Eigen::VectorXd got = lw.grad * local;
          const double scale = std::max(1.0, proj[c].cwiseAbs().maxCoeff());
          worst = std::max(worst, (got - proj[c]).cwiseAbs().maxCoeff() / scale);
        }
      }
      add("weakops.discrete_commuting_identity", n, worst <= 1e-9, num(worst));
    }

    const Eigen::SparseMatrix<double> a = assemble_a(mesh, velocity, multiplier);
    {
      const Eigen::SparseMatrix<double> at = a.transpose();
      const double asym = (Eigen::MatrixXd(a) - Eigen::MatrixXd(at)).cwiseAbs().maxCoeff();
      const double amax = Eigen::MatrixXd(a).cwiseAbs().maxCoeff();
      add("weakops.matrix_symmetry", n, asym <= 1e-12 * amax, num(asym / amax));
    }

    // Quadratic form consistency: x^T A x = sum_T |G_T x_T|_M^2.
    {
      std::uniform_real_distribution<double> dist(-1.0, 1.0);
      double worst = 0.0;
      for (int trial = 0; trial < 5; ++trial) {
        Eigen::VectorXd x(a.rows());
        for (int i = 0; i < x.size(); ++i) x[i] = dist(rng);
        Eigen::VectorXd vel_full = Eigen::VectorXd::Zero(velocity.num_global());
        for (int g = 0; g < velocity.num_global(); ++g)
          if (velocity.free_index(g) >= 0) vel_full[g] = x[velocity.free_index(g)];
        const Eigen::VectorXd lam = x.tail(multiplier.num_global());
        double sum = 0.0;
        for (int c = 0; c < mesh.num_cells(); ++c) {
          const LocalWeakGrad lw = local_weak_devgrad(mesh, velocity, multiplier, c);
          Eigen::VectorXd local(lw.velocity_dofs.size() + lw.multiplier_dofs.size());
          int i = 0;
          for (int g : lw.velocity_dofs) local[i++] = vel_full[g];
          for (int g : lw.multiplier_dofs) local[i++] = lam[g];
          const Eigen::VectorXd gx = lw.grad * local;
          sum += gx.dot(lw.gram * gx);
        }
        const double quad = x.dot(a * x);
        worst = std::max(worst, std::abs(quad - sum) / std::max(1.0, std::abs(quad)));
      }
      add("weakops.quadratic_form_consistency", n, worst <= 1e-12, num(worst));
    }

    // Spectrum: A is PSD; positive definite on the discretely divergence-free
    // subspace; the stacked weak gradient has full rank.
    {
      const PressureSpace pressure(mesh, config_.l);
      const Eigen::SparseMatrix<double> b = assemble_b(mesh, velocity, multiplier, pressure);
      const Eigen::MatrixXd ad(a);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(ad);
      const double lambda_min = eig.eigenvalues().minCoeff();
      const double lambda_max = eig.eigenvalues().maxCoeff();
      add("weakops.positive_semidefinite", n, lambda_min >= -1e-10 * lambda_max,
          "min=" + num(lambda_min));

      const Eigen::MatrixXd bd(b);
      Eigen::FullPivLU<Eigen::MatrixXd> blu(bd);
      blu.setThreshold(1e-10);
      const Eigen::MatrixXd kernel = blu.kernel();
      const Eigen::MatrixXd proj = kernel.transpose() * ad * kernel;
      const Eigen::MatrixXd gram_k = kernel.transpose() * kernel;
      Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> geig(proj, gram_k);
      const double pd_min = geig.eigenvalues().minCoeff();
      add("weakops.definite_on_divfree", n, pd_min > 1e-12 * lambda_max, "min=" + num(pd_min));

      Eigen::MatrixXd stacked(3 * scalar_space_dim(k) * mesh.num_cells(), a.rows());
      stacked.setZero();
      for (int c = 0; c < mesh.num_cells(); ++c) {
        const LocalWeakGrad lw = local_weak_devgrad(mesh, velocity, multiplier, c);
        const int rows = static_cast<int>(lw.grad.rows());
        for (int col = 0; col < lw.grad.cols(); ++col) {
          int sys = -1;
          if (col < static_cast<int>(lw.velocity_dofs.size()))
            sys = velocity.free_index(lw.velocity_dofs[col]);
          else
            sys = velocity.num_free() +
                  lw.multiplier_dofs[col - lw.velocity_dofs.size()];
          if (sys < 0) continue;
          stacked.block(c * rows, sys, rows, 1) += lw.grad.col(col);
        }
      }
      Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(stacked);
      qr.setThreshold(1e-10);
      add("weakops.kernel_rank", n, qr.rank() == a.rows(),
          "rank=" + std::to_string(qr.rank()) + "/" + std::to_string(a.rows()));
    }

    // Pairing identity (div tau, v_h) = -(I^tn tau, dev grad_w(v_h, Q Pi v_h))
    // for tn-interpolated smooth traceless tau and every free velocity basis
    // function (requires the BDM pairing, k >= 1).
    if (config_.l == k - 1) {
      double worst = 0.0;
      const QuadratureRule vrule = triangle_rule(18);
      for (int trial = 0; trial < 5; ++trial) {
        const Poly2 t11 = Poly2::random(k + 1, rng);
        const Poly2 t12 = Poly2::random(k + 1, rng);
        const Poly2 t21 = Poly2::random(k + 1, rng);
        TensorField tau = [&](double x, double y) {
          Eigen::Matrix2d m2;
          const double d = t11(x, y);
          m2 << d, t12(x, y), t21(x, y), -d;
          return m2;
        };
        const Poly2 d11 = t11.dx(), d12 = t12.dy(), d21 = t21.dx(), d22 = t11.dy();
        VectorField div_tau = [&](double x, double y) {
          return Eigen::Vector2d(d11(x, y) + d12(x, y), d21(x, y) - d22(x, y));
        };
        const std::vector<Eigen::VectorXd> itau = stress.interpolate_tn(tau);

        for (int e = 0; e < mesh.num_edges() && worst <= 1e-6; ++e) {
          if (mesh.edge_on_boundary[e]) continue;
          Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(velocity.num_global());
          coeffs[velocity.global_edge_dof(e, trial % (k + 1))] = 1.0;

          double lhs = 0.0;
          Eigen::VectorXd qmu = Eigen::VectorXd::Zero(multiplier.num_global());
          for (int c = 0; c < mesh.num_cells(); ++c) {
            const MappedRule vol = map_to_cell(vrule, mesh, c);
            Eigen::MatrixX2d uv;
            velocity.field_values(c, coeffs, vol.points, uv);
            for (Eigen::Index q = 0; q < vol.points.rows(); ++q)
              lhs += vol.weights[q] *
                     uv.row(q).dot(div_tau(vol.points(q, 0), vol.points(q, 1)).transpose());
          }
          // Q_k of the tangential trace of the basis field, edge by edge.
          const QuadratureRule erule = edge_rule(18);
          for (int ee = 0; ee < mesh.num_edges(); ++ee) {
            if (multiplier.edge_base(ee) < 0) continue;
            const MappedRule er = map_to_edge(erule, mesh, ee);
            const Eigen::MatrixXd leg =
                edge_legendre_values(mesh.edge_length[ee], k, erule.points.col(0));
            const int c = mesh.edge_cells[ee][0];
            Eigen::MatrixX2d uv;
            velocity.field_values(c, coeffs, er.points, uv);
            const Eigen::VectorXd ut =
                uv.col(0) * mesh.edge_tangent[ee].x() + uv.col(1) * mesh.edge_tangent[ee].y();
            for (int r = 0; r <= k; ++r)
              qmu[multiplier.edge_base(ee) + r] = er.weights.cwiseProduct(leg.col(r)).dot(ut);
          }

          double rhs = 0.0;
          for (int c = 0; c < mesh.num_cells(); ++c) {
            const LocalWeakGrad lw = local_weak_devgrad(mesh, velocity, multiplier, c);
            Eigen::VectorXd local(lw.velocity_dofs.size() + lw.multiplier_dofs.size());
            int i = 0;
            for (int g : lw.velocity_dofs) local[i++] = coeffs[g];
            for (int g : lw.multiplier_dofs) local[i++] = qmu[g];
            rhs -= itau[c].dot(lw.gram * (lw.grad * local));
          }
          worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
        }
      }
      add("weakops.interpolant_pairing", n, worst <= 1e-9, num(worst));
    }
  }

  void solve_checks(const Mesh& mesh, int n) {
    const ExactSolution& exact = *find_example(config_.example);
    const SpaceConfig sc{config_.k, config_.l};
    StokesSolution solution;
    bool solved = true;
    std::string failure;
    try {
      solution = solve_stokes(mesh, sc, exact.forcing);
    } catch (const std::exception& ex) {
      solved = false;
      failure = ex.what();
    }
    if (!solved) {
      add("system.solver_residual", n, false, failure);
      add("system.divergence_free", n, false, failure);
      add("system.stress_tn_continuity", n, false, failure);
      add("system.pressure_mean_zero", n, false, failure);
      add("exact.superconvergence_identity", n, false, failure);
      add("postproc.pointwise_divergence_free", n, false, failure);
      add("postproc.edge_flux_match", n, false, failure);
      add("postproc.projection_bounds", n, false, failure);
      return;
    }

    add("system.solver_residual", n, solution.residual <= 1e-10, num(solution.residual));
    const double divres = divergence_free_residual(solution);
    add("system.divergence_free", n, divres <= 1e-9, num(divres));
    const double jump = stress_tn_jump(solution);
    add("system.stress_tn_continuity", n, jump <= 1e-9, num(jump));
    const double pmean = std::abs(solution.pressure_mean);
    const double pnorm = solution.pressure.norm();
    add("system.pressure_mean_zero", n, pmean <= 1e-10 * std::max(1.0, pnorm), num(pmean));

    {
      const StokesSolution zero =
          solve_stokes(mesh, sc, [](double, double) { return Eigen::Vector2d::Zero(); });
      const double scale = std::max({zero.velocity.cwiseAbs().maxCoeff(),
                                     zero.multiplier.size() ? zero.multiplier.cwiseAbs().maxCoeff()
                                                            : 0.0,
                                     zero.pressure.cwiseAbs().maxCoeff()});
      add("system.zero_forcing_uniqueness", n, scale <= 1e-12, num(scale));
    }

    // Superconvergence identity:
    // ||dev grad_w(I u - u_h, Q lambda - lambda_h)|| = ||Q_k sigma - sigma_h||.
    {
      const int k = config_.k;
      const VelocitySpace velocity(mesh, sc);
      const VelocitySpace rt(mesh, SpaceConfig{k, k});
      const MultiplierSpace multiplier(mesh, k);
      const StressSpace stress(mesh, k);
      const Eigen::VectorXd iu = rt.interpolate(exact.velocity);
      const Eigen::VectorXd qlam = multiplier.project_tangential_trace(exact.velocity);
      const std::vector<Eigen::VectorXd> qsigma = stress.l2_project(exact.velocity_gradient);

      double lhs2 = 0.0, rhs2 = 0.0;
      for (int c = 0; c < mesh.num_cells(); ++c) {
        const LocalWeakGrad lw = local_weak_devgrad(mesh, rt, multiplier, c);
        const Eigen::VectorXd uh_dofs = rt.cell_dofs_of_discrete(c, velocity, solution.velocity);
        const std::vector<int> dofs = rt.cell_global_dofs(c);
        Eigen::VectorXd local(lw.velocity_dofs.size() + lw.multiplier_dofs.size());
        int i = 0;
        for (std::size_t j = 0; j < dofs.size(); ++j, ++i) local[i] = iu[dofs[j]] - uh_dofs[j];
        for (int g : lw.multiplier_dofs) local[i++] = qlam[g] - solution.multiplier[g];
        const Eigen::VectorXd coeff = lw.grad * local;
        lhs2 += coeff.dot(lw.gram * coeff);
        const Eigen::VectorXd dq = qsigma[c] - solution.stress[c];
        rhs2 += dq.dot(lw.gram * dq);
      }
      const double lhs = std::sqrt(lhs2), rhs = std::sqrt(rhs2);
      const double rel = std::abs(lhs - rhs) / std::max(1e-30, rhs);
      add("exact.superconvergence_identity", n, rel <= 1e-9,
          "lhs=" + num(lhs) + " rhs=" + num(rhs));
    }

    // Postprocessing invariants.
    {
      const PostprocessedVelocity post = postprocess(solution);
      const VelocitySpace velocity(mesh, sc);
      const QuadratureRule vrule = triangle_rule(18);
      const QuadratureRule erule = edge_rule(18);
      double divmax = 0.0, umax = 0.0, fluxerr = 0.0, fluxscale = 1.0;
      for (int c = 0; c < mesh.num_cells(); ++c) {
        const MappedRule vol = map_to_cell(vrule, mesh, c);
        const Eigen::VectorXd div = post.divergence(c, vol.points);
        Eigen::MatrixX2d vals;
        post.values(c, vol.points, vals);
        divmax = std::max(divmax, div.cwiseAbs().maxCoeff());
        umax = std::max(umax, vals.cwiseAbs().maxCoeff());
        for (int j = 0; j < 3; ++j) {
          const int e = mesh.cell_edges[c][j].edge;
          const MappedRule edge = map_to_edge(erule, mesh, e);
          Eigen::MatrixX2d ustar, uh;
          post.values(c, edge.points, ustar);
          velocity.field_values(c, solution.velocity, edge.points, uh);
          const Eigen::Vector2d nf = mesh.edge_normal[e];
          const double f_star = edge.weights.dot(ustar.col(0) * nf.x() + ustar.col(1) * nf.y());
          const double f_h = edge.weights.dot(uh.col(0) * nf.x() + uh.col(1) * nf.y());
          fluxerr = std::max(fluxerr, std::abs(f_star - f_h));
          fluxscale = std::max(fluxscale, std::abs(f_h));
        }
      }
      const double divrel = divmax * mesh.max_diameter() / std::max(umax, 1e-30);
      add("postproc.pointwise_divergence_free", n, divrel <= 1e-9, num(divrel));
      add("postproc.edge_flux_match", n, fluxerr / fluxscale <= 1e-10, num(fluxerr / fluxscale));

      const ErrorRow row = error_norms(solution, &post, exact);
      const bool bound1 = row.err_qsigma <= row.err_sigma * (1.0 + 1e-12);
      const bool bound2 = row.err_sigma <= row.err_sigma_0h * (1.0 + 1e-12);
      add("postproc.projection_bounds", n, bound1 && bound2,
          "Qsigma=" + num(row.err_qsigma) + " sigma=" + num(row.err_sigma) +
              " sigma0h=" + num(row.err_sigma_0h));
    }
  }

  void exact_checks() {
    const ExactSolution& exact = *find_example(config_.example);
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    double divmax = 0.0, fdmax = 0.0, gradfd = 0.0;
    const double step = 1e-4;
    for (int i = 0; i < 100; ++i) {
      const double x = 0.05 + 0.9 * unif(rng), y = 0.05 + 0.9 * unif(rng);
      divmax = std::max(divmax, std::abs(exact.velocity_gradient(x, y).trace()));

      // grad u against central differences of u.
      const Eigen::Vector2d dudx =
          (exact.velocity(x + step, y) - exact.velocity(x - step, y)) / (2 * step);
      const Eigen::Vector2d dudy =
          (exact.velocity(x, y + step) - exact.velocity(x, y - step)) / (2 * step);
      Eigen::Matrix2d fd;
      fd << dudx.x(), dudy.x(), dudx.y(), dudy.y();
      gradfd = std::max(gradfd, (fd - exact.velocity_gradient(x, y)).cwiseAbs().maxCoeff());

      // f = -Laplace(u) - grad(p) by second differences.
      const Eigen::Vector2d lap =
          (exact.velocity(x + step, y) + exact.velocity(x - step, y) +
           exact.velocity(x, y + step) + exact.velocity(x, y - step) -
           4.0 * exact.velocity(x, y)) /
          (step * step);
      const double px = (exact.pressure(x + step, y) - exact.pressure(x - step, y)) / (2 * step);
      const double py = (exact.pressure(x, y + step) - exact.pressure(x, y - step)) / (2 * step);
      const Eigen::Vector2d f = -lap - Eigen::Vector2d(px, py);
      fdmax = std::max(fdmax, (f - exact.forcing(x, y)).cwiseAbs().maxCoeff());
    }
    add("exact.divergence_free", divmax <= 1e-12, num(divmax));
    add("exact.gradient_consistency", gradfd <= 1e-5, num(gradfd));
    add("exact.forcing_consistency", fdmax <= 1e-5, num(fdmax));

    double bmax = 0.0;
    for (int i = 0; i < 20; ++i) {
      const double s = unif(rng);
      bmax = std::max({bmax, exact.velocity(s, 0.0).norm(), exact.velocity(s, 1.0).norm(),
                       exact.velocity(0.0, s).norm(), exact.velocity(1.0, s).norm()});
    }
    add("exact.boundary_trace_zero", bmax <= 1e-14, num(bmax));

    const Mesh mesh = Mesh::uniform_unit_square(4);
    const QuadratureRule vrule = triangle_rule(18);
    double integral = 0.0;
    for (int c = 0; c < mesh.num_cells(); ++c) {
      const MappedRule vol = map_to_cell(vrule, mesh, c);
      for (Eigen::Index q = 0; q < vol.points.rows(); ++q)
        integral += vol.weights[q] * exact.pressure(vol.points(q, 0), vol.points(q, 1));
    }
    add("exact.pressure_mean_zero", std::abs(integral) <= 1e-12, num(integral));
  }

  RunConfig config_;
  std::vector<PropertyResult> results_;
};

}  // namespace

std::vector<PropertyResult> run_property_suite(const RunConfig& config) {
  config.validate();
  Suite suite(config);
  return suite.run();
}

std::string properties_to_json(const std::vector<PropertyResult>& results,
                               const RunConfig& config) {
  nlohmann::ordered_json doc;
  doc["config"] = {{"k", config.k},
                   {"l", config.l},
                   {"example", config.example},
                   {"debug_flip_normals", config.debug_flip_normals}};
  doc["mesh_convention"] = Mesh::diagonal_convention();
  doc["properties"] = nlohmann::ordered_json::array();
  bool all = true;
  for (const auto& r : results) {
    doc["properties"].push_back({{"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
    all = all && r.pass;
  }
  doc["all_pass"] = all;
  return doc.dump(2) + "\n";
}

}  // namespace stokesfem
