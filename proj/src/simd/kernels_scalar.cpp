// SPDX-License-Identifier: Apache-2.0
#include "stagg/simd/kernels.hpp"

namespace stagg::simd::detail {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = y[i] + alpha * x[i];
}

void bernoulli_convolve_scalar(const double* src, double* dst, std::size_t len, double p) {
  const double q = 1.0 - p;
  if (len == 0) {
    dst[0] = 0.0;
    return;
  }
  dst[0] = src[0] * q;
  for (std::size_t r = 1; r < len; ++r) dst[r] = src[r] * q + src[r - 1] * p;
  dst[len] = src[len - 1] * p;
}

void rotate_scalar(double* x, double* y, std::size_t n, double c, double s) {
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = x[i];
    const double yi = y[i];
    x[i] = c * xi - s * yi;
    y[i] = s * xi + c * yi;
  }
}

}  // namespace

const KernelTable scalar_table{Isa::scalar, dot_scalar, axpy_scalar,
                               bernoulli_convolve_scalar, rotate_scalar};

}  // namespace stagg::simd::detail
