#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

#include "fraktur/error.hpp"
#include "fraktur/fem_assembly.hpp"
#include "fraktur/linear_solver.hpp"

using namespace fraktur;

namespace {

TriMesh unit_triangle() {
  TriMesh m;
  m.vertices = {Vec2(0, 0), Vec2(1, 0), Vec2(0, 1)};
  m.triangles = {{0, 1, 2}};
  return m;
}

ModelSpec model(Family f, std::optional<AnisotropyParams> an = std::nullopt,
                DegradationSpec g = DegradationSpec::quadratic(), double ell = 0.3) {
  return ModelSpec(f, an, g, ell);
}

SimState random_state(std::size_t n, std::mt19937& rng) {
  std::uniform_real_distribution<double> U(-1.0, 1.0), A(0.0, 1.0);
  SimState s = SimState::zeros(n);
  for (std::size_t i = 0; i < n; ++i) {
    s.u[i] = U(rng);
    s.alpha[i] = A(rng);
    s.alpha_prev[i] = A(rng);
  }
  return s;
}

double rel_inf(const Vector& a, const Vector& b) { return (a - b).lpNorm<Eigen::Infinity>() / b.lpNorm<Eigen::Infinity>(); }

}  // namespace

TEST_CASE("quadrature rules integrate polynomials exactly") {
  // Integral over the reference triangle of l0^a l1^b l2^c is a! b! c! 2! / (a+b+c+2)! times the area.
  auto exact = [](int a, int b, int c) {
    return std::tgamma(a + 1) * std::tgamma(b + 1) * std::tgamma(c + 1) * 2.0 / std::tgamma(a + b + c + 3);
  };
  for (int deg : {1, 2, 4, 5}) {
    const QuadratureRule r = quadrature_rule(deg);
    double wsum = 0.0;
    for (double w : r.weights) wsum += w;
    CHECK(wsum == doctest::Approx(1.0).epsilon(1e-14));
    for (int a = 0; a <= deg; ++a)
      for (int b = 0; a + b <= deg; ++b) {
        const int c = deg - a - b;
        double q = 0.0;
        for (std::size_t i = 0; i < r.points.size(); ++i)
          q += r.weights[i] * std::pow(r.points[i][0], a) * std::pow(r.points[i][1], b) * std::pow(r.points[i][2], c);
        CHECK(q == doctest::Approx(exact(a, b, c)).epsilon(1e-12));
      }
  }
  CHECK_THROWS_AS(quadrature_rule(6), InvalidArgument);
  CHECK(quadrature_rule(3).degree == 4);
}

TEST_CASE("energy examples") {
  const TriMesh sq = structured_rectangle(1, 1, 0, 0, 1, 1);
  const Assembler at2(sq, model(Family::AT2), 1.0);
  SimState s = SimState::zeros(sq.num_vertices());
  for (std::size_t i = 0; i < sq.num_vertices(); ++i) s.u[i] = sq.vertices[i].x();
  const EnergyBreakdown e = at2.energy(s, 0.0);
  CHECK(e.elastic == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(e.surface == 0.0);
  CHECK(e.total == e.elastic + e.surface + e.penalty);

  const double ell = 0.3, g0 = 1.7;
  const Assembler f4(sq, ModelSpec(Family::Foc4, std::nullopt, DegradationSpec::quartic_squared(), ell, g0), 1.0);
  SimState one = SimState::zeros(sq.num_vertices());
  one.alpha.setOnes();
  one.alpha_prev.setOnes();
  CHECK(f4.energy(one, 0.0).surface == doctest::Approx(g0 * 3.0 / (4.0 * b_w(4.0) * ell)).epsilon(1e-14));

  SimState pen = SimState::zeros(sq.num_vertices());
  pen.alpha.setConstant(0.4);
  pen.alpha_prev.setConstant(0.5);
  const double lam = 1234.5;
  CHECK(at2.energy(pen, lam).penalty == doctest::Approx(0.5 * lam * 0.01).epsilon(1e-12));
  pen.alpha.setConstant(0.6);
  CHECK(at2.energy(pen, lam).penalty == 0.0);
}

TEST_CASE("element stiffness of the unit right triangle") {
  const TriMesh m = unit_triangle();
  const Assembler a(m, model(Family::AT2), 1.0);
  const Eigen::MatrixXd k(a.stiffness(Vector::Zero(3), false));
  Eigen::Matrix3d ref;
  ref << 2, -1, -1, -1, 1, 0, -1, 0, 1;
  ref *= 0.5;
  CHECK((k - ref).cwiseAbs().maxCoeff() <= 1e-15);
  const Eigen::MatrixXd k4(a.stiffness(Vector::Constant(3, 0.5), false));
  CHECK((k4 - 0.25 * ref).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("displacement system with a fully broken field") {
  const TriMesh m = structured_rectangle(4, 4, 0, 0, 1, 1);
  const Assembler a(m, model(Family::AT2), 1.0);
  DirichletData bc;
  for (std::size_t i = 0; i < m.num_vertices(); ++i)
    if (m.vertices[i].y() == 0.0 || m.vertices[i].y() == 1.0) {
      bc.nodes.push_back(static_cast<int>(i));
      bc.values.push_back(m.vertices[i].y());
    }
  const DisplacementSystem sys = a.assemble_displacement_system(Vector::Ones(m.num_vertices()), bc);
  SpdSolver solver;
  const Vector red = solver.solve(sys.matrix, sys.rhs);
  CHECK((sys.matrix * red - sys.rhs).norm() <= 1e-10 * std::max(1.0, sys.rhs.norm()));
  const Vector u = sys.expand(red);
  for (std::size_t k = 0; k < bc.nodes.size(); ++k) CHECK(u[bc.nodes[k]] == bc.values[k]);
  // With uniform residual stiffness the solution is the harmonic one, u = y.
  for (std::size_t i = 0; i < m.num_vertices(); ++i) CHECK(u[i] == doctest::Approx(m.vertices[i].y()).scale(1.0));
  CHECK_THROWS_AS(a.assemble_displacement_system(Vector::Zero(m.num_vertices()), DirichletData{}), SolverError);
}

TEST_CASE("zero state has zero residuals") {
  const TriMesh m = structured_rectangle(3, 3, 0, 0, 1, 1);
  for (Family f : {Family::AT2, Family::Foc2, Family::Foc4}) {
    const Assembler a(m, model(f), 1.0);
    const SimState s = SimState::zeros(m.num_vertices());
    CHECK(a.residual_alpha(s, 100.0).isZero(0.0));
    CHECK(a.residual_u(s).isZero(0.0));
  }
}

TEST_CASE("derivatives match finite differences") {
  const TriMesh m = structured_rectangle(10, 10, 0, 0, 1, 1);
  REQUIRE(m.num_triangles() == 200);
  std::mt19937 rng(2024);
  const std::vector<ModelSpec> models = {
      model(Family::AT1),
      model(Family::AT2),
      model(Family::Foc2, AnisotropyParams(2, 0.6, 0.4)),
      model(Family::Foc4, AnisotropyParams(4, 0.5, 0.3), DegradationSpec::quartic_squared()),
      model(Family::Foc4, std::nullopt, DegradationSpec::poly_family(2)),
  };
  for (int quad : {1, 4}) {
    for (const ModelSpec& md : models) {
      CAPTURE(to_string(md.family()));
      CAPTURE(quad);
      const Assembler a(m, md, 1.3, quad);
      const double lam = 50.0;
      for (int trial = 0; trial < 3; ++trial) {
        SimState s = random_state(m.num_vertices(), rng);
        const double h = 1e-6;
        const Vector ra = a.residual_alpha(s, lam);
        const Vector ru = a.residual_u(s);
        Vector fda(ra.size()), fdu(ru.size());
        for (Eigen::Index i = 0; i < ra.size(); ++i) {
          SimState p = s, q = s;
          p.alpha[i] += h;
          q.alpha[i] -= h;
          fda[i] = (a.energy(p, lam).total - a.energy(q, lam).total) / (2 * h);
          p = s;
          q = s;
          p.u[i] += h;
          q.u[i] -= h;
          fdu[i] = (a.energy(p, lam).total - a.energy(q, lam).total) / (2 * h);
        }
        CHECK(rel_inf(ra, fda) <= 1e-6);
        CHECK(rel_inf(ru, fdu) <= 1e-6);
        const Eigen::MatrixXd hess(a.hessian_alpha(s, lam));
        Eigen::MatrixXd fdh(hess.rows(), hess.cols());
        for (Eigen::Index j = 0; j < ra.size(); ++j) {
          SimState p = s, q = s;
          p.alpha[j] += h;
          q.alpha[j] -= h;
          fdh.col(j) = (a.residual_alpha(p, lam) - a.residual_alpha(q, lam)) / (2 * h);
        }
        CHECK((hess - fdh).cwiseAbs().maxCoeff() / hess.cwiseAbs().maxCoeff() <= 1e-5);
        CHECK((hess - hess.transpose()).cwiseAbs().maxCoeff() <= 1e-14 * hess.cwiseAbs().maxCoeff());
      }
    }
  }
}

TEST_CASE("isotropic Foc2 equals AT2") {
  const TriMesh m = structured_rectangle(6, 6, 0, 0, 1, 1);
  std::mt19937 rng(7);
  const SimState s = random_state(m.num_vertices(), rng);
  const Assembler at2(m, model(Family::AT2), 1.0);
  const Assembler foc2(m, model(Family::Foc2, AnisotropyParams(2, 0.0, 0.7)), 1.0);
  CHECK((at2.residual_alpha(s, 10.0) - foc2.residual_alpha(s, 10.0)).lpNorm<Eigen::Infinity>() <= 1e-14);
  CHECK(std::abs(at2.energy(s, 10.0).total - foc2.energy(s, 10.0).total) <= 1e-14);
}

TEST_CASE("tau = 0 anisotropic assemblies equal isotropic ones") {
  const TriMesh m = structured_rectangle(6, 6, 0, 0, 1, 1);
  std::mt19937 rng(8);
  const SimState s = random_state(m.num_vertices(), rng);
  const Assembler iso(m, model(Family::Foc4), 1.0);
  const Assembler an(m, model(Family::Foc4, AnisotropyParams(4, 0.0, 0.3)), 1.0);
  CHECK(std::abs(iso.energy(s, 5.0).total - an.energy(s, 5.0).total) <= 1e-12);
  CHECK((iso.residual_alpha(s, 5.0) - an.residual_alpha(s, 5.0)).lpNorm<Eigen::Infinity>() <= 1e-12);
  const Eigen::MatrixXd d(iso.hessian_alpha(s, 5.0) - an.hessian_alpha(s, 5.0));
  CHECK(d.cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("rotating the mesh and shifting omega leaves the energy unchanged") {
  const TriMesh m = structured_rectangle(8, 8, -0.5, -0.5, 0.5, 0.5);
  std::mt19937 rng(9);
  const SimState s = random_state(m.num_vertices(), rng);
  for (int k : {2, 4}) {
    for (double beta : {0.3, 1.1, -2.0}) {
      TriMesh r = m;
      const Eigen::Rotation2Dd rot(beta);
      for (auto& v : r.vertices) v = rot * v;
      const Family f = k == 2 ? Family::Foc2 : Family::Foc4;
      const Assembler a(m, model(f, AnisotropyParams(k, 0.4, 0.2)), 1.0);
      const Assembler b(r, model(f, AnisotropyParams(k, 0.4, 0.2 + beta)), 1.0);
      const double ea = a.energy(s, 3.0).total, eb = b.energy(s, 3.0).total;
      CHECK(std::abs(ea - eb) <= 1e-10 * std::abs(ea));
    }
  }
}

TEST_CASE("alpha Hessian definiteness") {
  const TriMesh m = structured_rectangle(6, 6, 0, 0, 1, 1);
  std::mt19937 rng(10);
  const Assembler at2(m, model(Family::AT2), 1.0);
  for (int i = 0; i < 5; ++i) {
    const SimState s = random_state(m.num_vertices(), rng);
    const Eigen::MatrixXd h(at2.hessian_alpha(s, 0.0));
    CHECK(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(h).eigenvalues().minCoeff() > 0.0);
  }
  // Foc4 at tau = 0.5 with a smooth ridge in alpha and a strained field.
  const Assembler f4(m, model(Family::Foc4, AnisotropyParams(4, 0.5, 0.0), DegradationSpec::quartic_squared(), 0.2), 1.0);
  double lowest = 0.0;
  for (double amp : {0.5, 0.8, 1.0})
    for (double strain : {0.5, 2.0, 8.0}) {
      SimState s = SimState::zeros(m.num_vertices());
      for (std::size_t i = 0; i < m.num_vertices(); ++i) {
        const Vec2& p = m.vertices[i];
        s.alpha[i] = amp * std::exp(-std::pow((p.x() - p.y()) / 0.3, 2));
        s.u[i] = strain * p.x();
      }
      const Eigen::MatrixXd h(f4.hessian_alpha(s, 0.0));
      lowest = std::min(lowest, Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(h).eigenvalues().minCoeff());
    }
  CHECK(lowest < 0.0);
}

TEST_CASE("material zones") {
  const TriMesh m = structured_rectangle(4, 4, 0, 0, 1, 1);
  std::vector<int> mat(m.num_triangles(), 0);
  for (std::size_t e = 0; e < mat.size(); e += 2) mat[e] = 1;
  const ModelSpec soft(Family::AT2, std::nullopt, DegradationSpec::quadratic(), 0.3, 1.0);
  const ModelSpec hard(Family::AT2, std::nullopt, DegradationSpec::quadratic(), 0.3, 100.0);
  const Assembler two(m, {soft, hard}, mat, 1.0);
  const Assembler all_soft(m, soft, 1.0);
  SimState s = SimState::zeros(m.num_vertices());
  s.alpha.setConstant(0.5);
  s.alpha_prev = s.alpha;
  // Constant alpha: surface energy is area-weighted by G0.
  const double ratio = two.energy(s, 0.0).surface / all_soft.energy(s, 0.0).surface;
  CHECK(ratio == doctest::Approx(0.5 * 1.0 + 0.5 * 100.0).epsilon(1e-12));
  CHECK_THROWS_AS(Assembler(m, {soft}, mat, 1.0), InvalidArgument);
  CHECK_THROWS_AS(Assembler(m, soft, 0.0), InvalidArgument);
}

TEST_CASE("state validation") {
  const TriMesh m = structured_rectangle(2, 2, 0, 0, 1, 1);
  const Assembler a(m, model(Family::AT2), 1.0);
  SimState s = SimState::zeros(3);
  CHECK_THROWS_AS(a.energy(s, 0.0), InvalidArgument);
}
