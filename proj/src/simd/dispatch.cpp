// SPDX-License-Identifier: Apache-2.0
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "stagg/simd/kernels.hpp"

namespace stagg::simd {

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
  }
  return "unknown";
}

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(STAGG_HAVE_AVX2)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Isa::neon:
#if defined(STAGG_HAVE_NEON)
      return true;  // mandatory on aarch64
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& kernels_for(Isa isa) {
  if (!isa_available(isa))
    throw std::invalid_argument("SIMD variant not available: " + std::string(isa_name(isa)));
  switch (isa) {
#if defined(STAGG_HAVE_AVX2)
    case Isa::avx2: return detail::avx2_table;
#endif
#if defined(STAGG_HAVE_NEON)
    case Isa::neon: return detail::neon_table;
#endif
    default: return detail::scalar_table;
  }
}

namespace {

const KernelTable& select_kernels() {
  if (const char* forced = std::getenv("STAGG_SIMD")) {
    for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon})
      if (isa_name(isa) == forced && isa_available(isa)) return kernels_for(isa);
  }
  for (Isa isa : {Isa::avx2, Isa::neon})
    if (isa_available(isa)) return kernels_for(isa);
  return detail::scalar_table;
}

}  // namespace

const KernelTable& active_kernels() {
  static const KernelTable& table = select_kernels();
  return table;
}

}  // namespace stagg::simd
