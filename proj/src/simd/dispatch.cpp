#include <cstdlib>
#include <string>

#include "fraktur/error.hpp"
#include "fraktur/simd/kernels.hpp"

namespace fraktur::simd {

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
  }
  return "?";
}

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return true;
    case Isa::Avx2:
#if defined(FRAKTUR_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& kernels_for(Isa isa) {
  if (!isa_available(isa))
    throw InvalidArgument("kernel variant '" + std::string(to_string(isa)) + "' is not available on this machine");
#if defined(FRAKTUR_HAVE_AVX2)
  if (isa == Isa::Avx2) return detail::avx2_table;
#endif
  return detail::scalar_table;
}

namespace {

const KernelTable& select() {
  const char* forced = std::getenv("FRAKTUR_SIMD");
  if (forced && std::string(forced) == "scalar") return detail::scalar_table;
  if (isa_available(Isa::Avx2)) return kernels_for(Isa::Avx2);
  return detail::scalar_table;
}

}  // namespace

const KernelTable& kernels() {
  static const KernelTable& table = select();
  return table;
}

}  // namespace fraktur::simd
