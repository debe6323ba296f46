#pragma once

#include <cstddef>
#include <string_view>

namespace fraktur::simd {

enum class Isa { Scalar, Avx2 };

std::string_view to_string(Isa isa);

/// Coefficients of phi^k in the layout of fraktur::NormPolynomial.
struct NormCoefficients {
  int k = 2;
  double c[5] = {0, 0, 0, 0, 0};
};

/// Element-batch kernels over structure-of-arrays data. Every elementwise kernel
/// performs the same IEEE operations in the same order in all variants, so
/// results are bitwise identical across ISAs. `dot` reduces in a different
/// order per ISA and agrees only to rounding.
struct KernelTable {
  Isa isa;

  /// gx[e] = sum_i bx[i][e] * v[i][e], same for gy (P1 gradient from nodal values).
  void (*gradient)(std::size_t n, const double* const v[3], const double* const bx[3], const double* const by[3],
                   double* gx, double* gy);

  /// phi^k and its first and second derivatives at (gx[e], gy[e]).
  void (*norm_density)(std::size_t n, const NormCoefficients& coeffs, const double* gx, const double* gy,
                       double* value, double* dx, double* dy, double* hxx, double* hxy, double* hyy);

  /// p(x[e]), p'(x[e]), p''(x[e]) for the polynomial c[0] + c[1] x + ... + c[degree] x^degree.
  /// Any of value/d1/d2 may be null.
  void (*polynomial)(std::size_t n, const double* coeffs, int degree, const double* x, double* value, double* d1,
                     double* d2);

  double (*dot)(std::size_t n, const double* a, const double* b);

  /// y += a * x
  void (*axpy)(std::size_t n, double a, const double* x, double* y);

  /// z[e] = x[e] * y[e]
  void (*multiply)(std::size_t n, const double* x, const double* y, double* z);
};

bool isa_available(Isa isa);

/// Table for a specific ISA. Throws fraktur::InvalidArgument if the ISA was not
/// compiled in or the CPU lacks it.
const KernelTable& kernels_for(Isa isa);

/// Best available table, chosen once per process. FRAKTUR_SIMD=scalar forces
/// the scalar reference.
const KernelTable& kernels();

namespace detail {
extern const KernelTable scalar_table;
#if defined(FRAKTUR_HAVE_AVX2)
extern const KernelTable avx2_table;
#endif
}  // namespace detail

}  // namespace fraktur::simd
