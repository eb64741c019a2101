// SPDX-License-Identifier: Apache-2.0
#pragma once

// Data-parallel inner loops shared by the rank-distribution DP, the linear
// scorer and the Jacobi SVD. Each kernel has a scalar reference and optional
// AVX2 / NEON variants; one table is selected at first use.
//
// Element-wise kernels (axpy, bernoulli_convolve, rotate) are bit-identical
// across variants. dot() is a reduction and only agrees to rounding.

#include <cstddef>
#include <span>
#include <string_view>

namespace stagg::simd {

enum class Isa { scalar, avx2, neon };

struct KernelTable {
  Isa isa;
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y[i] += alpha * x[i]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // One Poisson-binomial step: dst[r] = src[r]*(1-p) + src[r-1]*p for
  // r in [0, len], with src[-1] = src[len] = 0. dst must hold len+1 values.
  void (*bernoulli_convolve)(const double* src, double* dst, std::size_t len, double p);
  // Plane rotation: x <- c*x - s*y, y <- s*x + c*y
  void (*rotate)(double* x, double* y, std::size_t n, double c, double s);
};

std::string_view isa_name(Isa isa);

/// True if this binary carries the variant and the running CPU supports it.
bool isa_available(Isa isa);

/// Kernel table for a specific ISA. Throws std::invalid_argument if unavailable.
const KernelTable& kernels_for(Isa isa);

/// Best available table, chosen once. The environment variable STAGG_SIMD
/// (scalar|avx2|neon) forces a variant when it is available.
const KernelTable& active_kernels();

namespace detail {
extern const KernelTable scalar_table;
#if defined(STAGG_HAVE_AVX2)
extern const KernelTable avx2_table;
#endif
#if defined(STAGG_HAVE_NEON)
extern const KernelTable neon_table;
#endif
}  // namespace detail

inline double dot(std::span<const double> a, std::span<const double> b) {
  return active_kernels().dot(a.data(), b.data(), a.size());
}

inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  active_kernels().axpy(alpha, x.data(), y.data(), x.size());
}

inline void rotate(std::span<double> x, std::span<double> y, double c, double s) {
  active_kernels().rotate(x.data(), y.data(), x.size(), c, s);
}

inline void bernoulli_convolve(std::span<const double> src, std::span<double> dst, double p) {
  active_kernels().bernoulli_convolve(src.data(), dst.data(), src.size(), p);
}

}  // namespace stagg::simd
