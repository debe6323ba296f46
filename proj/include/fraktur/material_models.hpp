#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fraktur/anisotropy.hpp"

namespace fraktur {

enum class Family { AT1, AT2, Foc2, Foc4 };

std::string_view to_string(Family f);
/// Accepts "AT1", "AT2", "Foc2", "Foc4" (case-insensitive, optional '-').
Family parse_family(std::string_view name);

/// Dense polynomial in alpha, c[i] multiplies alpha^i.
struct Polynomial {
  std::vector<double> c;

  double operator()(double x) const;
  double derivative(double x) const;
  double second_derivative(double x) const;
  int degree() const { return static_cast<int>(c.size()) - 1; }
};

struct DegradationSpec {
  enum class Kind { QuadraticOneMinusAlpha, PolyFamily, QuarticSquared };

  Kind kind = Kind::QuadraticOneMinusAlpha;
  int m = 4;  ///< only meaningful for PolyFamily

  static DegradationSpec quadratic() { return {Kind::QuadraticOneMinusAlpha, 0}; }
  static DegradationSpec poly_family(int m);
  static DegradationSpec quartic_squared() { return {Kind::QuarticSquared, 4}; }

  std::string name() const;
};

/// "quadratic", "quartic_squared", "poly<m>" (e.g. "poly3").
DegradationSpec parse_degradation(std::string_view name);

/// Closed-form coefficients of g.
Polynomial degradation_polynomial(const DegradationSpec& spec);

struct DegradationValue {
  double g = 0.0;
  double dg = 0.0;
  double d2g = 0.0;
  bool clamped = false;  ///< alpha was outside [0,1] and got clamped before evaluation
};

DegradationValue degradation(const DegradationSpec& spec, double alpha);

struct DerivedDegradation {
  Polynomial g;
  double s = 0.0;  ///< constant in -alpha^3 (1 - alpha^m) / g'(alpha) = s
};

/// Integrates g' = -alpha^3 (1 - alpha^m) / s with g(0) = 1 and picks s so that g(1) = 0.
DerivedDegradation derive_degradation(int m);

/// Normalization of the AT dissipation: 8/3 (AT1), 2 (AT2).
double c_w(Family f);
/// (2 * int_0^1 t^(p-1) dt)^q with q = p/(p-1), i.e. (2/p)^q. b_w(4) = 2^(-4/3), b_w(2) = 1.
double b_w(double p);

class ModelSpec {
 public:
  ModelSpec(Family family, std::optional<AnisotropyParams> anisotropy, DegradationSpec degradation, double ell,
            double g0 = 1.0);

  Family family() const noexcept { return family_; }
  const std::optional<AnisotropyParams>& anisotropy() const noexcept { return anisotropy_; }
  const DegradationSpec& degradation() const noexcept { return degradation_; }
  double ell() const noexcept { return ell_; }
  double g0() const noexcept { return g0_; }

  /// Power of the gradient term: 4 for Foc4, 2 otherwise.
  int gradient_power() const noexcept { return family_ == Family::Foc4 ? 4 : 2; }
  bool is_anisotropic() const noexcept { return anisotropy_.has_value() && anisotropy_->tau() > 0.0; }

 private:
  Family family_;
  std::optional<AnisotropyParams> anisotropy_;
  DegradationSpec degradation_;
  double ell_;
  double g0_;
};

/// Surface energy density is  local(alpha) + gradient_coefficient * phi^p(grad alpha).
struct LocalTerm {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

/// AT1: G0 alpha/(c_w ell); AT2, Foc2: G0 alpha^2/(2 ell); Foc4: 3 G0 alpha^4/(4 b_w ell).
LocalTerm surface_local(const ModelSpec& model, double alpha);
/// Polynomial form of surface_local, coefficients in alpha.
Polynomial surface_local_polynomial(const ModelSpec& model);
/// AT1: G0 ell/c_w; AT2, Foc2: G0 ell/2; Foc4: G0 ell^3/4.
double gradient_coefficient(const ModelSpec& model);
/// phi^p as a polynomial in the gradient (Euclidean when the model is isotropic).
NormPolynomial gradient_norm_polynomial(const ModelSpec& model);

struct HomogeneousPoint {
  double eps_bar = 0.0;
  double sigma_bar = 0.0;
};

/// Rescaled strain and stress of the homogeneous 1D solution with damage alpha.
/// Throws DomainError for alpha outside [0,1).
HomogeneousPoint homogeneous_response(const ModelSpec& model, double alpha);

/// argmax of sigma_bar over [0,1), golden-section search to 1e-8.
double critical_damage(const ModelSpec& model);

struct MonotonicityScan {
  double min_derivative = 0.0;
  double max_derivative = 0.0;
};

/// Central differences of the Foc4 sigma_bar with PolyFamily(m) on a 10^4-point grid of [0,1].
MonotonicityScan stress_monotonicity_scan(int m);

double optimal_profile(const ModelSpec& model, double t);
double optimal_profile_slope(const ModelSpec& model, double t);

/// Trapezoid integral of the 1D surface density over the closed-form profile on
/// [-L, L], divided by G0.
double profile_surface_energy(const ModelSpec& model, double half_length, double h);

struct Profile1D {
  std::vector<double> t;
  std::vector<double> alpha;
  double energy = 0.0;  ///< full-line surface energy / G0 (twice the half-line value)
  int iterations = 0;
};

/// Direct minimization of the half-line surface energy on [0, L] with
/// alpha(0) = 1 and alpha >= 0, P1 elements of size h.
Profile1D minimize_profile_1d(const ModelSpec& model, double half_length, double h);

/// -slope * ell of a least-squares fit of log(alpha) against t over samples with
/// alpha in [lo, hi].
double fit_decay_constant(const Profile1D& profile, double ell, double lo = 1e-3, double hi = 0.5);

}  // namespace fraktur
