// SPDX-License-Identifier: Apache-2.0
#include <immintrin.h>

#include "stagg/simd/kernels.hpp"

namespace stagg::simd::detail {
namespace {

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    acc1 = _mm256_add_pd(acc1,
                         _mm256_mul_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4)));
  }
  for (; i + 4 <= n; i += 4)
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  acc0 = _mm256_add_pd(acc0, acc1);
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc0);
  double acc = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vy = _mm256_loadu_pd(y + i);
    vy = _mm256_add_pd(vy, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
    _mm256_storeu_pd(y + i, vy);
  }
  for (; i < n; ++i) y[i] = y[i] + alpha * x[i];
}

void bernoulli_convolve_avx2(const double* src, double* dst, std::size_t len, double p) {
  const double q = 1.0 - p;
  if (len == 0) {
    dst[0] = 0.0;
    return;
  }
  dst[0] = src[0] * q;
  const __m256d vp = _mm256_set1_pd(p);
  const __m256d vq = _mm256_set1_pd(q);
  std::size_t r = 1;
  for (; r + 4 <= len; r += 4) {
    const __m256d stay = _mm256_mul_pd(_mm256_loadu_pd(src + r), vq);
    const __m256d step = _mm256_mul_pd(_mm256_loadu_pd(src + r - 1), vp);
    _mm256_storeu_pd(dst + r, _mm256_add_pd(stay, step));
  }
  for (; r < len; ++r) dst[r] = src[r] * q + src[r - 1] * p;
  dst[len] = src[len - 1] * p;
}

void rotate_avx2(double* x, double* y, std::size_t n, double c, double s) {
  const __m256d vc = _mm256_set1_pd(c);
  const __m256d vs = _mm256_set1_pd(s);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d xi = _mm256_loadu_pd(x + i);
    const __m256d yi = _mm256_loadu_pd(y + i);
    _mm256_storeu_pd(x + i, _mm256_sub_pd(_mm256_mul_pd(vc, xi), _mm256_mul_pd(vs, yi)));
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_mul_pd(vs, xi), _mm256_mul_pd(vc, yi)));
  }
  for (; i < n; ++i) {
    const double xi = x[i];
    const double yi = y[i];
    x[i] = c * xi - s * yi;
    y[i] = s * xi + c * yi;
  }
}

}  // namespace

const KernelTable avx2_table{Isa::avx2, dot_avx2, axpy_avx2, bernoulli_convolve_avx2,
                             rotate_avx2};

}  // namespace stagg::simd::detail
