#pragma once

#include <array>
#include <iosfwd>
#include <variant>

#include <Eigen/Dense>

namespace fraktur {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// k-fold orientation dependence of the fracture toughness,
/// G_c(theta) = G0 * (1 + tau * cos(k (theta - omega))).
///
/// k is 2 or 4, 0 <= tau < 1. omega is stored reduced modulo 2*pi/k, the
/// period of the toughness function.
class AnisotropyParams {
 public:
  AnisotropyParams(int k, double tau, double omega);

  int k() const noexcept { return k_; }
  double tau() const noexcept { return tau_; }
  double omega() const noexcept { return omega_; }
  double period() const noexcept;

  bool operator==(const AnisotropyParams&) const = default;

 private:
  int k_;
  double tau_;
  double omega_;
};

/// gamma_k(theta) = 1 + tau cos(k(theta - omega)).
double gamma(const AnisotropyParams& p, double theta);

/// Second derivative of gamma with respect to theta.
double gamma_second_derivative(const AnisotropyParams& p, double theta);

/// Toughness factor written in terms of the crack normal n = (-sin theta, cos theta).
/// Throws InvalidArgument when |n| differs from 1 by more than 1e-12.
double gamma_normal(const AnisotropyParams& p, const Vec2& n);

/// Value, gradient and Hessian of phi^k(xi), the k-th power of the
/// gamma_k-induced norm. Homogeneous of degree k; all three vanish at xi = 0
/// for k = 4 (the Hessian is the constant 2B for k = 2).
struct NormDensity {
  double value = 0.0;
  Vec2 grad = Vec2::Zero();
  Mat2 hess = Mat2::Zero();
};

NormDensity induced_norm_density(const AnisotropyParams& p, const Vec2& xi);

/// Euclidean counterpart |xi|^k, used by the isotropic models.
NormDensity euclidean_norm_density(int k, const Vec2& xi);

/// Monomial coefficients of phi^k.
///   k = 2: c = {Bxx, Bxy, Byy}          phi^2 = Bxx x^2 + 2 Bxy x y + Byy y^2
///   k = 4: c = {a40, a31, a22, a13, a04} phi^4 = sum a_ij x^i y^j
struct NormPolynomial {
  int k = 2;
  std::array<double, 5> c{};
};

NormPolynomial norm_polynomial(const AnisotropyParams& p);
NormPolynomial euclidean_norm_polynomial(int k);
NormDensity evaluate(const NormPolynomial& poly, const Vec2& xi);

struct StructureTensor2 {
  Mat2 b;
};

struct StructureTensor4 {
  std::array<double, 16> bb{};
  double operator()(int i, int j, int k, int l) const { return bb[((i * 2 + j) * 2 + k) * 2 + l]; }
  double& operator()(int i, int j, int k, int l) { return bb[((i * 2 + j) * 2 + k) * 2 + l]; }
};

StructureTensor2 structure_tensor2(const AnisotropyParams& p);
StructureTensor4 structure_tensor4(const AnisotropyParams& p);
std::variant<StructureTensor2, StructureTensor4> structure_tensors(const AnisotropyParams& p);

/// B xi . xi
double contract(const StructureTensor2& t, const Vec2& xi);
/// BB (xi x xi) . (xi x xi)
double contract(const StructureTensor4& t, const Vec2& xi);

struct WeakAnisotropy {
  bool is_weak = false;       ///< analytic: tau <= 1/(k^2 - 1)
  double tau_threshold = 0.0;
  double scan_min = 0.0;      ///< min of gamma + gamma'' over 721 samples of [0, 2pi]
  bool scan_is_weak = false;
};

WeakAnisotropy weak_anisotropy_check(const AnisotropyParams& p);

struct NormBounds {
  double lower = 0.0;
  double upper = 0.0;
  double value = 0.0;
};

/// (1 - tau)|xi|^k <= phi^k(xi) <= (1 + tau)|xi|^k. Throws std::logic_error if
/// the computed density escapes the bounds beyond round-off.
NormBounds norm_bounds(const AnisotropyParams& p, const Vec2& xi);

/// CSV `theta,gamma,inv_gamma` with 721 rows over [0, 2pi].
void write_polar_csv(std::ostream& os, const AnisotropyParams& p);

}  // namespace fraktur
