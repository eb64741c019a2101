// SPDX-License-Identifier: Apache-2.0
#include <arm_neon.h>

#include "stagg/simd/kernels.hpp"

namespace stagg::simd::detail {
namespace {

// vmulq/vaddq only: vfmaq would break bit-equality with the scalar path.

double dot_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vaddq_f64(acc0, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
    acc1 = vaddq_f64(acc1, vmulq_f64(vld1q_f64(a + i + 2), vld1q_f64(b + i + 2)));
  }
  acc0 = vaddq_f64(acc0, acc1);
  double acc = vgetq_lane_f64(acc0, 0) + vgetq_lane_f64(acc0, 1);
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void axpy_neon(double alpha, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), vmulq_f64(va, vld1q_f64(x + i))));
  for (; i < n; ++i) y[i] = y[i] + alpha * x[i];
}

void bernoulli_convolve_neon(const double* src, double* dst, std::size_t len, double p) {
  const double q = 1.0 - p;
  if (len == 0) {
    dst[0] = 0.0;
    return;
  }
  dst[0] = src[0] * q;
  const float64x2_t vp = vdupq_n_f64(p);
  const float64x2_t vq = vdupq_n_f64(q);
  std::size_t r = 1;
  for (; r + 2 <= len; r += 2) {
    const float64x2_t stay = vmulq_f64(vld1q_f64(src + r), vq);
    const float64x2_t step = vmulq_f64(vld1q_f64(src + r - 1), vp);
    vst1q_f64(dst + r, vaddq_f64(stay, step));
  }
  for (; r < len; ++r) dst[r] = src[r] * q + src[r - 1] * p;
  dst[len] = src[len - 1] * p;
}

void rotate_neon(double* x, double* y, std::size_t n, double c, double s) {
  const float64x2_t vc = vdupq_n_f64(c);
  const float64x2_t vs = vdupq_n_f64(s);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t xi = vld1q_f64(x + i);
    const float64x2_t yi = vld1q_f64(y + i);
    vst1q_f64(x + i, vsubq_f64(vmulq_f64(vc, xi), vmulq_f64(vs, yi)));
    vst1q_f64(y + i, vaddq_f64(vmulq_f64(vs, xi), vmulq_f64(vc, yi)));
  }
  for (; i < n; ++i) {
    const double xi = x[i];
    const double yi = y[i];
    x[i] = c * xi - s * yi;
    y[i] = s * xi + c * yi;
  }
}

}  // namespace

const KernelTable neon_table{Isa::neon, dot_neon, axpy_neon, bernoulli_convolve_neon,
                             rotate_neon};

}  // namespace stagg::simd::detail
