#include "fraktur/anisotropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "fraktur/error.hpp"
#include "fraktur/format.hpp"

namespace fraktur {

namespace {

constexpr double kPi = std::numbers::pi;

double reduce_angle(double omega, double period) {
  double r = std::fmod(omega, period);
  if (r < 0.0) r += period;
  // fmod can return exactly `period` after the shift for tiny negative inputs
  if (r >= period) r = 0.0;
  return r;
}

}  // namespace

AnisotropyParams::AnisotropyParams(int k, double tau, double omega) : k_(k), tau_(tau), omega_(omega) {
  if (k != 2 && k != 4) throw InvalidArgument("anisotropy fold k must be 2 or 4, got " + std::to_string(k));
  if (!(tau >= 0.0 && tau < 1.0)) throw InvalidArgument("anisotropy strength tau must lie in [0,1), got " + fmt17(tau));
  if (!std::isfinite(omega)) throw InvalidArgument("anisotropy direction omega must be finite");
  omega_ = reduce_angle(omega, period());
}

double AnisotropyParams::period() const noexcept { return 2.0 * kPi / k_; }

double gamma(const AnisotropyParams& p, double theta) {
  return 1.0 + p.tau() * std::cos(p.k() * (theta - p.omega()));
}

double gamma_second_derivative(const AnisotropyParams& p, double theta) {
  const double k = p.k();
  return -p.tau() * k * k * std::cos(k * (theta - p.omega()));
}

double gamma_normal(const AnisotropyParams& p, const Vec2& n) {
  if (std::abs(n.norm() - 1.0) > 1e-12) throw InvalidArgument("gamma_normal: normal vector is not of unit length");
  // The induced norm evaluated on a unit vector is the toughness factor itself.
  return evaluate(norm_polynomial(p), n).value;
}

NormPolynomial norm_polynomial(const AnisotropyParams& p) {
  NormPolynomial poly;
  poly.k = p.k();
  const double t = p.tau();
  if (p.k() == 2) {
    const double c = std::cos(2.0 * p.omega());
    const double s = std::sin(2.0 * p.omega());
    poly.c = {1.0 - t * c, -t * s, 1.0 + t * c, 0.0, 0.0};
  } else {
    const double c = std::cos(4.0 * p.omega());
    const double s = std::sin(4.0 * p.omega());
    poly.c = {1.0 + t * c, 4.0 * t * s, 2.0 - 6.0 * t * c, -4.0 * t * s, 1.0 + t * c};
  }
  return poly;
}

NormPolynomial euclidean_norm_polynomial(int k) {
  NormPolynomial poly;
  poly.k = k;
  if (k == 2)
    poly.c = {1.0, 0.0, 1.0, 0.0, 0.0};
  else if (k == 4)
    poly.c = {1.0, 0.0, 2.0, 0.0, 1.0};
  else
    throw InvalidArgument("norm power must be 2 or 4");
  return poly;
}

NormDensity evaluate(const NormPolynomial& poly, const Vec2& xi) {
  NormDensity d;
  const double x = xi.x();
  const double y = xi.y();
  const auto& c = poly.c;
  if (poly.k == 2) {
    const double bxx = c[0], bxy = c[1], byy = c[2];
    d.value = bxx * x * x + 2.0 * bxy * x * y + byy * y * y;
    d.grad = Vec2(2.0 * (bxx * x + bxy * y), 2.0 * (bxy * x + byy * y));
    d.hess << 2.0 * bxx, 2.0 * bxy, 2.0 * bxy, 2.0 * byy;
    return d;
  }
  const double a40 = c[0], a31 = c[1], a22 = c[2], a13 = c[3], a04 = c[4];
  const double x2 = x * x, y2 = y * y, xy = x * y;
  d.value = a40 * x2 * x2 + a31 * x2 * xy + a22 * x2 * y2 + a13 * xy * y2 + a04 * y2 * y2;
  d.grad = Vec2(4.0 * a40 * x2 * x + 3.0 * a31 * x2 * y + 2.0 * a22 * x * y2 + a13 * y2 * y,
                a31 * x2 * x + 2.0 * a22 * x2 * y + 3.0 * a13 * x * y2 + 4.0 * a04 * y2 * y);
  const double hxx = 12.0 * a40 * x2 + 6.0 * a31 * xy + 2.0 * a22 * y2;
  const double hxy = 3.0 * a31 * x2 + 4.0 * a22 * xy + 3.0 * a13 * y2;
  const double hyy = 2.0 * a22 * x2 + 6.0 * a13 * xy + 12.0 * a04 * y2;
  d.hess << hxx, hxy, hxy, hyy;
  return d;
}

NormDensity induced_norm_density(const AnisotropyParams& p, const Vec2& xi) {
  return evaluate(norm_polynomial(p), xi);
}

NormDensity euclidean_norm_density(int k, const Vec2& xi) { return evaluate(euclidean_norm_polynomial(k), xi); }

StructureTensor2 structure_tensor2(const AnisotropyParams& p) {
  if (p.k() != 2) throw InvalidArgument("second-order structure tensor requires k = 2");
  Mat2 d;
  d << std::cos(2.0 * p.omega()), std::sin(2.0 * p.omega()), std::sin(2.0 * p.omega()), -std::cos(2.0 * p.omega());
  return {Mat2::Identity() - p.tau() * d};
}

StructureTensor4 structure_tensor4(const AnisotropyParams& p) {
  if (p.k() != 4) throw InvalidArgument("fourth-order structure tensor requires k = 4");
  const double c = std::cos(4.0 * p.omega());
  const double s = std::sin(4.0 * p.omega());

  // D component by number of indices equal to 2 (index value 1 below):
  //   none or all -> -cos, two -> +cos, one -> -sin, three -> +sin.
  StructureTensor4 t;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) {
          const int twos = i + j + k + l;
          double dval = 0.0;
          switch (twos) {
            case 0:
            case 4: dval = -c; break;
            case 2: dval = c; break;
            case 1: dval = -s; break;
            case 3: dval = s; break;
          }
          const double identity = (i == j && k == l) ? 1.0 : 0.0;
          t(i, j, k, l) = identity - p.tau() * dval;
        }
  return t;
}

std::variant<StructureTensor2, StructureTensor4> structure_tensors(const AnisotropyParams& p) {
  if (p.k() == 2) return structure_tensor2(p);
  return structure_tensor4(p);
}

double contract(const StructureTensor2& t, const Vec2& xi) { return xi.dot(t.b * xi); }

double contract(const StructureTensor4& t, const Vec2& xi) {
  double sum = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) sum += t(i, j, k, l) * xi[i] * xi[j] * xi[k] * xi[l];
  return sum;
}

WeakAnisotropy weak_anisotropy_check(const AnisotropyParams& p) {
  WeakAnisotropy r;
  const double k = p.k();
  r.tau_threshold = 1.0 / (k * k - 1.0);
  r.is_weak = p.tau() <= r.tau_threshold;

  constexpr int samples = 721;
  r.scan_min = std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    const double theta = 2.0 * kPi * i / (samples - 1);
    r.scan_min = std::min(r.scan_min, gamma(p, theta) + gamma_second_derivative(p, theta));
  }
  r.scan_is_weak = r.scan_min >= -1e-12;
  return r;
}

NormBounds norm_bounds(const AnisotropyParams& p, const Vec2& xi) {
  const double r2 = xi.squaredNorm();
  const double rk = p.k() == 2 ? r2 : r2 * r2;
  NormBounds b;
  b.lower = (1.0 - p.tau()) * rk;
  b.upper = (1.0 + p.tau()) * rk;
  b.value = induced_norm_density(p, xi).value;
  const double slack = 1e-12 * std::max(rk, 1e-300);
  if (b.value < b.lower - slack || b.value > b.upper + slack)
    throw std::logic_error("induced norm density escaped its equivalence bounds");
  return b;
}

void write_polar_csv(std::ostream& os, const AnisotropyParams& p) {
  os << "theta,gamma,inv_gamma\n";
  constexpr int rows = 721;
  for (int i = 0; i < rows; ++i) {
    const double theta = 2.0 * kPi * i / (rows - 1);
    const double g = gamma(p, theta);
    os << fmt17(theta) << ',' << fmt17(g) << ',' << fmt17(1.0 / g) << '\n';
  }
}

}  // namespace fraktur
