#pragma once

#include <array>

#include "fraktur/error.hpp"

namespace fraktur::simd {

inline constexpr int kMaxDegree = 15;

// Coefficients of p, p' and p'' indexed by the power of x they multiply in p,
// so all variants run the same Horner recurrences.
struct HornerCoefficients {
  std::array<double, kMaxDegree + 1> c0{}, c1{}, c2{};

  HornerCoefficients(const double* coeffs, int degree) {
    if (degree < 0 || degree > kMaxDegree) throw InvalidArgument("polynomial kernel: degree out of range");
    for (int i = 0; i <= degree; ++i) {
      c0[i] = coeffs[i];
      c1[i] = static_cast<double>(i) * coeffs[i];
      c2[i] = static_cast<double>(i * (i - 1)) * coeffs[i];
    }
  }
};

}  // namespace fraktur::simd
