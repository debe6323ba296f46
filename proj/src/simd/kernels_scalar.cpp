#include "fraktur/simd/kernels.hpp"

#include "kernel_common.hpp"

namespace fraktur::simd {

namespace {

void gradient(std::size_t n, const double* const v[3], const double* const bx[3], const double* const by[3],
              double* gx, double* gy) {
  for (std::size_t e = 0; e < n; ++e) {
    gx[e] = bx[0][e] * v[0][e] + bx[1][e] * v[1][e] + bx[2][e] * v[2][e];
    gy[e] = by[0][e] * v[0][e] + by[1][e] * v[1][e] + by[2][e] * v[2][e];
  }
}

void norm_density(std::size_t n, const NormCoefficients& nc, const double* gx, const double* gy, double* value,
                  double* dx, double* dy, double* hxx, double* hxy, double* hyy) {
  const double* c = nc.c;
  if (nc.k == 2) {
    const double bxx = c[0], bxy = c[1], byy = c[2];
    for (std::size_t e = 0; e < n; ++e) {
      const double x = gx[e], y = gy[e];
      value[e] = bxx * x * x + 2.0 * bxy * x * y + byy * y * y;
      dx[e] = 2.0 * (bxx * x + bxy * y);
      dy[e] = 2.0 * (bxy * x + byy * y);
      hxx[e] = 2.0 * bxx;
      hxy[e] = 2.0 * bxy;
      hyy[e] = 2.0 * byy;
    }
    return;
  }
  const double a40 = c[0], a31 = c[1], a22 = c[2], a13 = c[3], a04 = c[4];
  for (std::size_t e = 0; e < n; ++e) {
    const double x = gx[e], y = gy[e];
    const double x2 = x * x, y2 = y * y, xy = x * y;
    value[e] = a40 * x2 * x2 + a31 * x2 * xy + a22 * x2 * y2 + a13 * xy * y2 + a04 * y2 * y2;
    dx[e] = 4.0 * a40 * x2 * x + 3.0 * a31 * x2 * y + 2.0 * a22 * x * y2 + a13 * y2 * y;
    dy[e] = a31 * x2 * x + 2.0 * a22 * x2 * y + 3.0 * a13 * x * y2 + 4.0 * a04 * y2 * y;
    hxx[e] = 12.0 * a40 * x2 + 6.0 * a31 * xy + 2.0 * a22 * y2;
    hxy[e] = 3.0 * a31 * x2 + 4.0 * a22 * xy + 3.0 * a13 * y2;
    hyy[e] = 2.0 * a22 * x2 + 6.0 * a13 * xy + 12.0 * a04 * y2;
  }
}

void polynomial(std::size_t n, const double* coeffs, int degree, const double* x, double* value, double* d1,
                double* d2) {
  const HornerCoefficients h(coeffs, degree);
  for (std::size_t e = 0; e < n; ++e) {
    const double t = x[e];
    if (value) {
      double r = 0.0;
      for (int i = degree; i >= 0; --i) r = r * t + h.c0[i];
      value[e] = r;
    }
    if (d1) {
      double r = 0.0;
      for (int i = degree; i >= 1; --i) r = r * t + h.c1[i];
      d1[e] = r;
    }
    if (d2) {
      double r = 0.0;
      for (int i = degree; i >= 2; --i) r = r * t + h.c2[i];
      d2[e] = r;
    }
  }
}

double dot(std::size_t n, const double* a, const double* b) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy(std::size_t n, double a, const double* x, double* y) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void multiply(std::size_t n, const double* x, const double* y, double* z) {
  for (std::size_t i = 0; i < n; ++i) z[i] = x[i] * y[i];
}

}  // namespace

namespace detail {
const KernelTable scalar_table{Isa::Scalar, gradient, norm_density, polynomial, dot, axpy, multiply};
}

}  // namespace fraktur::simd
