#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fraktur/material_models.hpp"

namespace fraktur {

/// Families covered by the existence/uniqueness table.
enum class WellposedFamily { IsoFoc4, Foc2, Foc4 };
std::string_view to_string(WellposedFamily f);
/// Accepts IsoFoc4, Foc2, Foc4 (case-insensitive, '-' and '_' ignored).
WellposedFamily parse_wellposed_family(std::string_view name);

enum class Verdict { Shown, NotShownByDM };
std::string_view to_string(Verdict v);

struct ExistenceReport {
  WellposedFamily family = WellposedFamily::Foc2;
  double tau = 0.0;
  Verdict existence = Verdict::Shown;
  Verdict uniqueness = Verdict::Shown;
  std::string basis;
};

/// Eigenvalues (lambda1 >= lambda2) of the xi-Hessian of the Foc2 gradient
/// density (G0 ell/2) phi^2(xi): G0 ell (1 +- tau).
std::pair<double, double> hessian_eigs_foc2(double tau, double omega, double g0, double ell);

/// Closed-form eigenvalues (lambda1 >= lambda2) of the xi-Hessian of the Foc4
/// gradient density (G0 ell^3/4) phi^4(xi).
std::pair<double, double> hessian_eigs_foc4(const Vec2& xi, double tau, double omega, double g0, double ell);

/// Eigenvalues of the analytic xi-Hessian of the gradient density, computed
/// numerically from the anisotropy module's norm polynomial.
std::pair<double, double> numeric_hessian_eigs(int k, const Vec2& xi, double tau, double omega, double g0, double ell);

struct CoercivityCheck {
  double bound = 0.0;
  double density = 0.0;  ///< local + gradient part of the surface density, Psi dropped
  bool holds = false;    ///< density >= bound - 1e-12 max(1, |bound|)
};

/// Foc2: (G0/2)(alpha^2/ell + (1-tau) ell |xi|^2); Foc4: (G0/4)(3 alpha^4/(b_w ell) + (1-tau) ell^3 |xi|^4).
CoercivityCheck coercivity_bound(WellposedFamily family, double tau, double omega, double alpha, const Vec2& xi,
                                 double g0, double ell);

ExistenceReport classify(WellposedFamily family, double tau);

/// d2/dalpha2 of g(alpha) Psi + local(alpha) for Foc2 with g = (1-alpha)^2.
double alpha_curvature_foc2(double alpha, double psi, double g0, double ell);
/// Same for Foc4 with g = (1-alpha^4)^2: g'' Psi + 9 G0 alpha^2/(b_w ell).
double alpha_curvature_foc4(double alpha, double psi, double g0, double ell);

struct CurvatureWitness {
  double alpha = 0.0;
  double psi = 0.0;
  double curvature = 0.0;
};
/// A point with negative Foc4 alpha-curvature, found by scanning alpha in (0,1) at the given Psi.
CurvatureWitness foc4_negative_curvature_witness(double psi, double g0, double ell);

struct SweepPoint {
  double tau = 0.0;
  double min_lambda2 = 0.0;  ///< min over omega and unit xi of the Foc4 lambda2
};
/// Deterministic grid over omega in [0, pi/2) and xi on the unit circle.
std::vector<SweepPoint> foc4_lambda2_sweep(const std::vector<double>& taus, double g0, double ell, int n_omega = 90,
                                           int n_xi = 360);

/// Minimum of the Foc4 lambda2 over omega and unit xi, refined by local search.
double foc4_min_lambda2(double tau, double g0, double ell);

}  // namespace fraktur
