// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "stagg/errors.hpp"
#include "stagg/linalg.hpp"
#include "stagg/simd/kernels.hpp"

namespace stagg::linalg {
namespace {

constexpr std::size_t kMaxSweeps = 100;
constexpr double kOrthTol = 1e-15;

// Fills zero columns of `u` (flags in `missing`) with unit vectors orthogonal
// to every other column, taken from the standard basis by Gram-Schmidt.
void complete_orthonormal(Matrix& u, const std::vector<bool>& missing) {
  const std::size_t n = u.rows();
  std::vector<bool> filled(u.cols());
  for (std::size_t c = 0; c < u.cols(); ++c) filled[c] = !missing[c];
  std::size_t basis = 0;
  std::vector<double> cand(n);
  for (std::size_t c = 0; c < u.cols(); ++c) {
    if (filled[c]) continue;
    for (; basis < n; ++basis) {
      std::fill(cand.begin(), cand.end(), 0.0);
      cand[basis] = 1.0;
      for (int pass = 0; pass < 2; ++pass)
        for (std::size_t o = 0; o < u.cols(); ++o)
          if (filled[o]) simd::axpy(-simd::dot(u.col(o), cand), u.col(o), cand);
      const double norm = std::sqrt(simd::dot(cand, cand));
      if (norm > 1e-6) {
        for (std::size_t i = 0; i < n; ++i) u(i, c) = cand[i] / norm;
        filled[c] = true;
        ++basis;
        break;
      }
    }
    if (!filled[c]) throw InvalidArgument("cannot complete orthonormal basis");
  }
}

SvdResult jacobi_svd(const Matrix& m, std::size_t p) {
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  Matrix a = m;
  Matrix v = Matrix::identity(cols);

  for (std::size_t sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t i = 0; i + 1 < cols; ++i) {
      for (std::size_t j = i + 1; j < cols; ++j) {
        const double alpha = simd::dot(a.col(i), a.col(i));
        const double beta = simd::dot(a.col(j), a.col(j));
        const double gamma = simd::dot(a.col(i), a.col(j));
        if (gamma == 0.0 || std::abs(gamma) <= kOrthTol * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::hypot(1.0, zeta));
        const double c = 1.0 / std::hypot(1.0, t);
        const double s = c * t;
        simd::rotate(a.col(i), a.col(j), c, s);
        simd::rotate(v.col(i), v.col(j), c, s);
      }
    }
    if (!rotated) break;
  }

  std::vector<double> norms(cols);
  for (std::size_t c = 0; c < cols; ++c) norms[c] = std::sqrt(simd::dot(a.col(c), a.col(c)));
  std::vector<std::size_t> order(cols);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return norms[x] > norms[y]; });

  const double smax = cols ? norms[order[0]] : 0.0;
  const double cutoff = smax * 1e-12 * static_cast<double>(std::max(rows, cols));

  SvdResult out{Matrix(rows, p), std::vector<double>(p), Matrix(cols, p)};
  std::vector<bool> missing(p, false);
  for (std::size_t k = 0; k < p; ++k) {
    const std::size_t c = order[k];
    out.singular_values[k] = norms[c];
    for (std::size_t r = 0; r < cols; ++r) out.v(r, k) = v(r, c);
    if (norms[c] > cutoff && norms[c] > 0.0) {
      for (std::size_t r = 0; r < rows; ++r) out.u(r, k) = a(r, c) / norms[c];
    } else {
      missing[k] = true;
    }
  }
  complete_orthonormal(out.u, missing);
  return out;
}

}  // namespace

SvdResult truncated_svd(const Matrix& m, std::size_t p) {
  if (p < 1 || p > std::min(m.rows(), m.cols()))
    throw InvalidArgument("SVD rank must satisfy 1 <= p <= min(rows, cols)");
  for (double x : m.data())
    if (!std::isfinite(x)) throw InvalidArgument("SVD input has non-finite entries");
  if (m.rows() >= m.cols()) return jacobi_svd(m, p);
  SvdResult t = jacobi_svd(transpose(m), p);
  return {std::move(t.v), std::move(t.singular_values), std::move(t.u)};
}

Matrix reconstruct(const SvdResult& svd) {
  Matrix us = svd.u;
  for (std::size_t k = 0; k < us.cols(); ++k)
    for (double& x : us.col(k)) x *= svd.singular_values[k];
  return multiply(us, transpose(svd.v));
}

}  // namespace stagg::linalg
