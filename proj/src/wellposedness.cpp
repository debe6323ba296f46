#include "fraktur/wellposedness.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "fraktur/error.hpp"

namespace fraktur {

std::string_view to_string(WellposedFamily f) {
  switch (f) {
    case WellposedFamily::IsoFoc4: return "IsoFoc4";
    case WellposedFamily::Foc2: return "Foc2";
    case WellposedFamily::Foc4: return "Foc4";
  }
  return "?";
}

WellposedFamily parse_wellposed_family(std::string_view name) {
  std::string key;
  for (char c : name)
    if (c != '-' && c != '_') key += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (key == "isofoc4") return WellposedFamily::IsoFoc4;
  if (key == "foc2") return WellposedFamily::Foc2;
  if (key == "foc4") return WellposedFamily::Foc4;
  throw InvalidArgument("unknown family '" + std::string(name) + "' (expected IsoFoc4, Foc2 or Foc4)");
}

std::string_view to_string(Verdict v) { return v == Verdict::Shown ? "Shown" : "NotShownByDM"; }

namespace {

void check_tau(double tau) {
  if (!(tau >= 0.0 && tau < 1.0)) throw InvalidArgument("tau must lie in [0, 1)");
}

}  // namespace

std::pair<double, double> hessian_eigs_foc2(double tau, double /*omega*/, double g0, double ell) {
  check_tau(tau);
  return {g0 * ell * (1.0 + tau), g0 * ell * (1.0 - tau)};
}

std::pair<double, double> hessian_eigs_foc4(const Vec2& xi, double tau, double omega, double g0, double ell) {
  check_tau(tau);
  const double x = xi.x(), y = xi.y();
  const double r2 = x * x + y * y;
  const double r4 = r2 * r2;
  const double p = std::cos(4.0 * omega) * (x * x * x * x - 6.0 * x * x * y * y + y * y * y * y) +
                   4.0 * std::sin(4.0 * omega) * x * y * (x * x - y * y);
  const double root = std::sqrt(std::max(0.0, 9.0 * r4 * tau * tau + 6.0 * p * tau + r4));
  const double s = g0 * ell * ell * ell;
  return {s * (2.0 * r2 + root), s * (2.0 * r2 - root)};
}

std::pair<double, double> numeric_hessian_eigs(int k, const Vec2& xi, double tau, double omega, double g0,
                                               double ell) {
  const AnisotropyParams p(k, tau, omega);
  const NormDensity d = induced_norm_density(p, xi);
  const double coef = k == 2 ? 0.5 * g0 * ell : 0.25 * g0 * ell * ell * ell;
  Eigen::SelfAdjointEigenSolver<Mat2> eig(coef * d.hess);
  return {eig.eigenvalues()[1], eig.eigenvalues()[0]};
}

CoercivityCheck coercivity_bound(WellposedFamily family, double tau, double omega, double alpha, const Vec2& xi,
                                 double g0, double ell) {
  check_tau(tau);
  CoercivityCheck out;
  if (family == WellposedFamily::Foc2) {
    const AnisotropyParams p(2, tau, omega);
    out.bound = 0.5 * g0 * (alpha * alpha / ell + (1.0 - tau) * ell * xi.squaredNorm());
    out.density = 0.5 * g0 * alpha * alpha / ell + 0.5 * g0 * ell * induced_norm_density(p, xi).value;
  } else {
    const double t = family == WellposedFamily::IsoFoc4 ? 0.0 : tau;
    const AnisotropyParams p(4, t, omega);
    const double bw = b_w(4.0);
    const double a4 = alpha * alpha * alpha * alpha;
    const double x4 = xi.squaredNorm() * xi.squaredNorm();
    const double l3 = ell * ell * ell;
    out.bound = 0.25 * g0 * (3.0 * a4 / (bw * ell) + (1.0 - t) * l3 * x4);
    out.density = 0.75 * g0 * a4 / (bw * ell) + 0.25 * g0 * l3 * induced_norm_density(p, xi).value;
  }
  out.holds = out.density >= out.bound - 1e-12 * std::max(1.0, std::abs(out.bound));
  return out;
}

ExistenceReport classify(WellposedFamily family, double tau) {
  check_tau(tau);
  ExistenceReport r;
  r.family = family;
  r.tau = tau;
  switch (family) {
    case WellposedFamily::IsoFoc4:
      // The isotropic density is convex in the gradient whatever tau is passed.
      r.existence = Verdict::Shown;
      r.uniqueness = Verdict::NotShownByDM;
      r.basis = "|xi|^4 is convex; g''(alpha) Psi + 9 G0 alpha^2/(b_w ell) can be negative";
      break;
    case WellposedFamily::Foc2:
      r.existence = Verdict::Shown;
      r.uniqueness = Verdict::Shown;
      r.basis = "xi-Hessian eigenvalues G0 ell (1 +- tau) > 0 and g'' Psi + G0/ell > 0";
      break;
    case WellposedFamily::Foc4:
      r.existence = tau <= 1.0 / 3.0 ? Verdict::Shown : Verdict::NotShownByDM;
      r.uniqueness = Verdict::NotShownByDM;
      r.basis = tau <= 1.0 / 3.0
                    ? "lambda2 >= G0 ell^3 |xi|^2 (1 - 3 tau) >= 0; alpha-curvature can be negative"
                    : "lambda2 < 0 for some (omega, xi) when tau > 1/3; alpha-curvature can be negative";
      break;
  }
  return r;
}

double alpha_curvature_foc2(double alpha, double psi, double g0, double ell) {
  (void)alpha;
  return 2.0 * psi + g0 / ell;
}

double alpha_curvature_foc4(double alpha, double psi, double g0, double ell) {
  const double a2 = alpha * alpha;
  const double d2g = 56.0 * a2 * a2 * a2 - 24.0 * a2;
  return d2g * psi + 9.0 * g0 * a2 / (b_w(4.0) * ell);
}

CurvatureWitness foc4_negative_curvature_witness(double psi, double g0, double ell) {
  CurvatureWitness best{0.0, psi, 0.0};
  for (int i = 1; i < 1000; ++i) {
    const double a = i / 1000.0;
    const double c = alpha_curvature_foc4(a, psi, g0, ell);
    if (c < best.curvature) best = {a, psi, c};
  }
  return best;
}

std::vector<SweepPoint> foc4_lambda2_sweep(const std::vector<double>& taus, double g0, double ell, int n_omega,
                                           int n_xi) {
  std::vector<SweepPoint> out;
  for (double tau : taus) {
    double lo = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n_omega; ++i) {
      const double omega = 0.5 * std::numbers::pi * i / n_omega;
      for (int j = 0; j < n_xi; ++j) {
        const double th = 2.0 * std::numbers::pi * j / n_xi;
        lo = std::min(lo, hessian_eigs_foc4(Vec2(std::cos(th), std::sin(th)), tau, omega, g0, ell).second);
      }
    }
    out.push_back({tau, lo});
  }
  return out;
}

double foc4_min_lambda2(double tau, double g0, double ell) {
  // lambda2 on the unit circle depends only on 4(theta - omega); fix omega = 0 and refine theta.
  auto f = [&](double th) { return hessian_eigs_foc4(Vec2(std::cos(th), std::sin(th)), tau, 0.0, g0, ell).second; };
  const int n = 720;
  double best_th = 0.0, best = f(0.0);
  for (int j = 1; j < n; ++j) {
    const double th = 0.5 * std::numbers::pi * j / n;
    const double v = f(th);
    if (v < best) {
      best = v;
      best_th = th;
    }
  }
  double a = best_th - 0.5 * std::numbers::pi / n, b = best_th + 0.5 * std::numbers::pi / n;
  const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
  while (b - a > 1e-12) {
    const double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
    if (f(c) < f(d)) b = d;
    else a = c;
  }
  return std::min(best, f(0.5 * (a + b)));
}

}  // namespace fraktur
