#include <immintrin.h>

#include "fraktur/simd/kernels.hpp"
#include "kernel_common.hpp"

namespace fraktur::simd {

namespace {

inline __m256d mul(__m256d a, __m256d b) { return _mm256_mul_pd(a, b); }
inline __m256d add(__m256d a, __m256d b) { return _mm256_add_pd(a, b); }
inline __m256d bcast(double v) { return _mm256_set1_pd(v); }

void gradient(std::size_t n, const double* const v[3], const double* const bx[3], const double* const by[3],
              double* gx, double* gy) {
  std::size_t e = 0;
  for (; e + 4 <= n; e += 4) {
    const __m256d v0 = _mm256_loadu_pd(v[0] + e), v1 = _mm256_loadu_pd(v[1] + e), v2 = _mm256_loadu_pd(v[2] + e);
    const __m256d x = add(add(mul(_mm256_loadu_pd(bx[0] + e), v0), mul(_mm256_loadu_pd(bx[1] + e), v1)),
                          mul(_mm256_loadu_pd(bx[2] + e), v2));
    const __m256d y = add(add(mul(_mm256_loadu_pd(by[0] + e), v0), mul(_mm256_loadu_pd(by[1] + e), v1)),
                          mul(_mm256_loadu_pd(by[2] + e), v2));
    _mm256_storeu_pd(gx + e, x);
    _mm256_storeu_pd(gy + e, y);
  }
  for (; e < n; ++e) {
    gx[e] = bx[0][e] * v[0][e] + bx[1][e] * v[1][e] + bx[2][e] * v[2][e];
    gy[e] = by[0][e] * v[0][e] + by[1][e] * v[1][e] + by[2][e] * v[2][e];
  }
}

void norm_density(std::size_t n, const NormCoefficients& nc, const double* gx, const double* gy, double* value,
                  double* dx, double* dy, double* hxx, double* hxy, double* hyy) {
  const double* c = nc.c;
  std::size_t e = 0;
  if (nc.k == 2) {
    const double bxx = c[0], bxy = c[1], byy = c[2];
    const __m256d vxx = bcast(bxx), vxy = bcast(bxy), vyy = bcast(byy), two = bcast(2.0);
    const __m256d two_bxy = mul(two, vxy);
    const __m256d hx = bcast(2.0 * bxx), hm = bcast(2.0 * bxy), hy = bcast(2.0 * byy);
    for (; e + 4 <= n; e += 4) {
      const __m256d x = _mm256_loadu_pd(gx + e), y = _mm256_loadu_pd(gy + e);
      const __m256d val = add(add(mul(mul(vxx, x), x), mul(mul(two_bxy, x), y)), mul(mul(vyy, y), y));
      _mm256_storeu_pd(value + e, val);
      _mm256_storeu_pd(dx + e, mul(two, add(mul(vxx, x), mul(vxy, y))));
      _mm256_storeu_pd(dy + e, mul(two, add(mul(vxy, x), mul(vyy, y))));
      _mm256_storeu_pd(hxx + e, hx);
      _mm256_storeu_pd(hxy + e, hm);
      _mm256_storeu_pd(hyy + e, hy);
    }
    for (; e < n; ++e) {
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
  const __m256d v40 = bcast(a40), v31 = bcast(a31), v22 = bcast(a22), v13 = bcast(a13), v04 = bcast(a04);
  // Products of a literal and a coefficient are formed in the same order as the scalar code.
  const __m256d f40 = bcast(4.0 * a40), t31 = bcast(3.0 * a31), t22 = bcast(2.0 * a22), t13 = bcast(3.0 * a13),
                f04 = bcast(4.0 * a04);
  const __m256d h40 = bcast(12.0 * a40), s31 = bcast(6.0 * a31), fr22 = bcast(4.0 * a22), s13 = bcast(6.0 * a13),
                h04 = bcast(12.0 * a04);
  for (; e + 4 <= n; e += 4) {
    const __m256d x = _mm256_loadu_pd(gx + e), y = _mm256_loadu_pd(gy + e);
    const __m256d x2 = mul(x, x), y2 = mul(y, y), xy = mul(x, y);
    __m256d val = mul(mul(v40, x2), x2);
    val = add(val, mul(mul(v31, x2), xy));
    val = add(val, mul(mul(v22, x2), y2));
    val = add(val, mul(mul(v13, xy), y2));
    val = add(val, mul(mul(v04, y2), y2));
    _mm256_storeu_pd(value + e, val);

    __m256d gxv = mul(mul(f40, x2), x);
    gxv = add(gxv, mul(mul(t31, x2), y));
    gxv = add(gxv, mul(mul(t22, x), y2));
    gxv = add(gxv, mul(mul(v13, y2), y));
    _mm256_storeu_pd(dx + e, gxv);

    __m256d gyv = mul(mul(v31, x2), x);
    gyv = add(gyv, mul(mul(t22, x2), y));
    gyv = add(gyv, mul(mul(t13, x), y2));
    gyv = add(gyv, mul(mul(f04, y2), y));
    _mm256_storeu_pd(dy + e, gyv);

    _mm256_storeu_pd(hxx + e, add(add(mul(h40, x2), mul(s31, xy)), mul(t22, y2)));
    _mm256_storeu_pd(hxy + e, add(add(mul(t31, x2), mul(fr22, xy)), mul(t13, y2)));
    _mm256_storeu_pd(hyy + e, add(add(mul(t22, x2), mul(s13, xy)), mul(h04, y2)));
  }
  for (; e < n; ++e) {
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

__m256d horner(const double* c, int hi, int lo, __m256d t) {
  __m256d r = _mm256_setzero_pd();
  for (int i = hi; i >= lo; --i) r = add(mul(r, t), bcast(c[i]));
  return r;
}

double horner1(const double* c, int hi, int lo, double t) {
  double r = 0.0;
  for (int i = hi; i >= lo; --i) r = r * t + c[i];
  return r;
}

void polynomial(std::size_t n, const double* coeffs, int degree, const double* x, double* value, double* d1,
                double* d2) {
  const HornerCoefficients h(coeffs, degree);
  std::size_t e = 0;
  for (; e + 4 <= n; e += 4) {
    const __m256d t = _mm256_loadu_pd(x + e);
    if (value) _mm256_storeu_pd(value + e, horner(h.c0.data(), degree, 0, t));
    if (d1) _mm256_storeu_pd(d1 + e, horner(h.c1.data(), degree, 1, t));
    if (d2) _mm256_storeu_pd(d2 + e, horner(h.c2.data(), degree, 2, t));
  }
  for (; e < n; ++e) {
    if (value) value[e] = horner1(h.c0.data(), degree, 0, x[e]);
    if (d1) d1[e] = horner1(h.c1.data(), degree, 1, x[e]);
    if (d2) d2[e] = horner1(h.c2.data(), degree, 2, x[e]);
  }
}

double dot(std::size_t n, const double* a, const double* b) {
  __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = add(acc0, mul(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    acc1 = add(acc1, mul(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4)));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, add(acc0, acc1));
  double s = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy(std::size_t n, double a, const double* x, double* y) {
  const __m256d va = bcast(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(y + i, add(_mm256_loadu_pd(y + i), mul(va, _mm256_loadu_pd(x + i))));
  for (; i < n; ++i) y[i] += a * x[i];
}

void multiply(std::size_t n, const double* x, const double* y, double* z) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(z + i, mul(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  for (; i < n; ++i) z[i] = x[i] * y[i];
}

}  // namespace

namespace detail {
const KernelTable avx2_table{Isa::Avx2, gradient, norm_density, polynomial, dot, axpy, multiply};
}

}  // namespace fraktur::simd
