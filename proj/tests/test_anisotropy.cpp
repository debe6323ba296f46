#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "fraktur/anisotropy.hpp"
#include "fraktur/error.hpp"

using namespace fraktur;
using std::numbers::pi;

namespace {

// phi^k(xi) = |xi|^k gamma(theta) with xi/|xi| = (-sin theta, cos theta).
double phi_k_oracle(int k, double tau, double omega, const Vec2& xi) {
  const double r = xi.norm();
  if (r == 0.0) return 0.0;
  const double theta = std::atan2(-xi.x(), xi.y());
  return std::pow(r, k) * (1.0 + tau * std::cos(k * (theta - omega)));
}

}  // namespace

TEST_CASE("gamma values") {
  for (double th : {0.0, 0.3, 2.0, -1.0}) CHECK(gamma(AnisotropyParams(2, 0.0, 0.0), th) == 1.0);
  CHECK(gamma(AnisotropyParams(2, 0.5, pi / 4), pi / 4) == doctest::Approx(1.5).epsilon(1e-15));
  // Expanded form of cos(4x) = 8cos^4 x - 8cos^2 x + 1.
  const double c = std::cos(pi / 4);
  const double cos4 = 8 * std::pow(c, 4) - 8 * c * c + 1;
  CHECK(gamma(AnisotropyParams(4, 0.5, 0.0), pi / 4) == doctest::Approx(1.0 + 0.5 * cos4).epsilon(1e-14));
  CHECK(gamma(AnisotropyParams(4, 0.5, 0.0), pi / 4) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("parameter validation and omega reduction") {
  CHECK_THROWS_AS(AnisotropyParams(3, 0.1, 0.0), InvalidArgument);
  CHECK_THROWS_AS(AnisotropyParams(2, 1.0, 0.0), InvalidArgument);
  CHECK_THROWS_AS(AnisotropyParams(2, -0.1, 0.0), InvalidArgument);
  CHECK_THROWS_AS(AnisotropyParams(4, 0.1, NAN), InvalidArgument);
  const AnisotropyParams p(4, 0.2, pi / 2 + 0.1);
  CHECK(p.omega() == doctest::Approx(0.1).epsilon(1e-13));
  CHECK(AnisotropyParams(2, 0.2, -0.1).omega() == doctest::Approx(pi - 0.1).epsilon(1e-14));
}

TEST_CASE("gamma_normal") {
  for (double tau : {0.0, 0.3, 0.7})
    CHECK(gamma_normal(AnisotropyParams(2, tau, 0.0), Vec2(1, 0)) == doctest::Approx(1.0 - tau).epsilon(1e-15));
  CHECK(gamma_normal(AnisotropyParams(2, 0.0, 0.0), Vec2(0.6, 0.8)) == doctest::Approx(1.0).epsilon(1e-15));
  const double s = std::sqrt(0.5);
  CHECK(gamma_normal(AnisotropyParams(4, 0.3, 0.0), Vec2(s, s)) == doctest::Approx(0.7).epsilon(1e-14));
  CHECK(gamma_normal(AnisotropyParams(4, 0.3, 0.0), Vec2(s, s)) ==
        doctest::Approx(gamma(AnisotropyParams(4, 0.3, 0.0), -pi / 4)).epsilon(1e-14));
  CHECK_THROWS_AS(gamma_normal(AnisotropyParams(2, 0.1, 0.0), Vec2(1.0, 0.1)), InvalidArgument);
}

TEST_CASE("induced norm density against the polar oracle") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> U(-2.0, 2.0), T(0.0, 0.95), W(-4.0, 4.0);
  for (int i = 0; i < 500; ++i) {
    const int k = i % 2 ? 4 : 2;
    const double tau = T(rng), omega = W(rng);
    const Vec2 xi(U(rng), U(rng));
    const NormDensity d = induced_norm_density(AnisotropyParams(k, tau, omega), xi);
    const double ref = phi_k_oracle(k, tau, omega, xi);
    CHECK(d.value == doctest::Approx(ref).epsilon(1e-12));
    // Gradient and Hessian by central differences of the oracle.
    const double h = 1e-5;
    for (int a = 0; a < 2; ++a) {
      Vec2 e = Vec2::Zero();
      e[a] = h;
      const double fd = (phi_k_oracle(k, tau, omega, xi + e) - phi_k_oracle(k, tau, omega, xi - e)) / (2 * h);
      CHECK(d.grad[a] == doctest::Approx(fd).epsilon(1e-7).scale(1.0));
      const Vec2 gp = induced_norm_density(AnisotropyParams(k, tau, omega), xi + e).grad;
      const Vec2 gm = induced_norm_density(AnisotropyParams(k, tau, omega), xi - e).grad;
      for (int b = 0; b < 2; ++b)
        CHECK(d.hess(a, b) == doctest::Approx((gp[b] - gm[b]) / (2 * h)).epsilon(1e-7).scale(1.0));
    }
  }
}

TEST_CASE("induced norm density examples") {
  for (double tau : {0.0, 0.25, 0.5}) {
    CHECK(induced_norm_density(AnisotropyParams(2, tau, 0.0), Vec2(1, 0)).value == doctest::Approx(1 - tau));
    CHECK(induced_norm_density(AnisotropyParams(4, tau, 0.0), Vec2(1, 1)).value == doctest::Approx(4 * (1 - tau)));
  }
  for (int k : {2, 4}) {
    const NormDensity z = induced_norm_density(AnisotropyParams(k, 0.4, 0.3), Vec2::Zero());
    CHECK(z.value == 0.0);
    CHECK(z.grad.isZero());
  }
  CHECK(induced_norm_density(AnisotropyParams(4, 0.4, 0.3), Vec2::Zero()).hess.isZero());
}

TEST_CASE("homogeneity of phi^k") {
  const Vec2 xi(0.3, -1.1);
  for (int k : {2, 4}) {
    const AnisotropyParams p(k, 0.6, 0.9);
    const double t = 1.7;
    CHECK(induced_norm_density(p, t * xi).value == doctest::Approx(std::pow(t, k) * induced_norm_density(p, xi).value));
  }
}

TEST_CASE("structure tensors") {
  CHECK(structure_tensor2(AnisotropyParams(2, 0.0, 0.3)).b.isApprox(Mat2::Identity()));
  // B = I - tau D with D = [[cos 2w, sin 2w], [sin 2w, -cos 2w]].
  const Mat2 b = structure_tensor2(AnisotropyParams(2, 0.5, 0.0)).b;
  CHECK(b(0, 0) == doctest::Approx(0.5));
  CHECK(b(1, 1) == doctest::Approx(1.5));
  CHECK(b(0, 1) == doctest::Approx(0.0));
  const StructureTensor4 t = structure_tensor4(AnisotropyParams(4, 0.2, 0.0));
  CHECK(t(0, 0, 0, 0) == doctest::Approx(1.2));
  CHECK(std::holds_alternative<StructureTensor2>(structure_tensors(AnisotropyParams(2, 0.1, 0.0))));
  CHECK(std::holds_alternative<StructureTensor4>(structure_tensors(AnisotropyParams(4, 0.1, 0.0))));
  CHECK_THROWS_AS(structure_tensor4(AnisotropyParams(2, 0.1, 0.0)), InvalidArgument);

  // Contractions reproduce phi^k.
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const double tau = 0.5 * (U(rng) + 1), omega = 3 * U(rng);
    const Vec2 xi(U(rng), U(rng));
    CHECK(contract(structure_tensor2(AnisotropyParams(2, tau, omega)), xi) ==
          doctest::Approx(phi_k_oracle(2, tau, omega, xi)).epsilon(1e-12).scale(1.0));
    CHECK(contract(structure_tensor4(AnisotropyParams(4, tau, omega)), xi) ==
          doctest::Approx(phi_k_oracle(4, tau, omega, xi)).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("weak anisotropy thresholds") {
  CHECK(weak_anisotropy_check(AnisotropyParams(2, 0.2, 0.0)).is_weak);
  CHECK_FALSE(weak_anisotropy_check(AnisotropyParams(4, 0.2, 0.0)).is_weak);
  CHECK(weak_anisotropy_check(AnisotropyParams(4, 1.0 / 15.0, 0.0)).is_weak);
  CHECK(weak_anisotropy_check(AnisotropyParams(2, 1.0 / 3.0, 0.0)).is_weak);
  CHECK_FALSE(weak_anisotropy_check(AnisotropyParams(2, 0.34, 0.0)).is_weak);
  // The sampled scan agrees with the analytic threshold away from the boundary.
  for (double tau : {0.0, 0.05, 0.1, 0.3, 0.4, 0.9})
    for (int k : {2, 4}) {
      const WeakAnisotropy w = weak_anisotropy_check(AnisotropyParams(k, tau, 0.7));
      CHECK(w.is_weak == w.scan_is_weak);
    }
}

TEST_CASE("norm equivalence bounds") {
  const NormBounds iso = norm_bounds(AnisotropyParams(4, 0.0, 0.0), Vec2(0.5, 1.0));
  CHECK(iso.lower == iso.upper);
  CHECK(iso.value == doctest::Approx(std::pow(1.25, 2)));
  const NormBounds b2 = norm_bounds(AnisotropyParams(2, 0.5, 0.0), Vec2(1, 0));
  CHECK(b2.value == doctest::Approx(b2.lower));
  CHECK(b2.value == doctest::Approx(0.5));
  const NormBounds b4 = norm_bounds(AnisotropyParams(4, 0.5, 0.0), Vec2(1, 1));
  CHECK(b4.value == doctest::Approx(2.0));
  CHECK(b4.lower == doctest::Approx(2.0));

  std::mt19937 rng(17);
  std::uniform_real_distribution<double> U(-3.0, 3.0), T(0.0, 0.99);
  for (int i = 0; i < 2000; ++i) {
    const NormBounds b = norm_bounds(AnisotropyParams(i % 2 ? 2 : 4, T(rng), U(rng)), Vec2(U(rng), U(rng)));
    CHECK(b.value >= b.lower - 1e-12 * b.upper);
    CHECK(b.value <= b.upper * (1 + 1e-12));
  }
}

TEST_CASE("polar CSV") {
  std::ostringstream os;
  write_polar_csv(os, AnisotropyParams(2, 0.5, 0.0));
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "theta,gamma,inv_gamma");
  int rows = 0;
  while (std::getline(is, line)) {
    double th, g, ig;
    char c1, c2;
    std::istringstream ls(line);
    ls >> th >> c1 >> g >> c2 >> ig;
    CHECK(g * ig == doctest::Approx(1.0));
    ++rows;
  }
  CHECK(rows == 721);
}
