// SPDX-License-Identifier: Apache-2.0
#include "stagg/linalg.hpp"

#include <cmath>

#include "stagg/errors.hpp"
#include "stagg/simd/kernels.hpp"

namespace stagg::linalg {

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

double Matrix::frobenius_norm() const {
  return std::sqrt(simd::dot(data_, data_));
}

Matrix transpose(const Matrix& a) {
  Matrix t(a.cols(), a.rows());
  for (std::size_t c = 0; c < a.cols(); ++c)
    for (std::size_t r = 0; r < a.rows(); ++r) t(c, r) = a(r, c);
  return t;
}

Matrix multiply(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw InvalidArgument("matrix product shape mismatch");
  Matrix c(a.rows(), b.cols());
  for (std::size_t j = 0; j < b.cols(); ++j)
    for (std::size_t k = 0; k < a.cols(); ++k)
      if (const double bkj = b(k, j); bkj != 0.0) simd::axpy(bkj, a.col(k), c.col(j));
  return c;
}

Matrix gram(const Matrix& a) {
  Matrix g(a.cols(), a.cols());
  for (std::size_t i = 0; i < a.cols(); ++i)
    for (std::size_t j = i; j < a.cols(); ++j) g(i, j) = g(j, i) = simd::dot(a.col(i), a.col(j));
  return g;
}

Matrix hadamard(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw InvalidArgument("hadamard product shape mismatch");
  Matrix c(a.rows(), a.cols());
  for (std::size_t j = 0; j < a.cols(); ++j)
    for (std::size_t i = 0; i < a.rows(); ++i) c(i, j) = a(i, j) * b(i, j);
  return c;
}

Matrix solve_right_spd(const Matrix& b, const Matrix& g, double ridge) {
  const std::size_t p = g.rows();
  if (g.cols() != p || b.cols() != p) throw InvalidArgument("solve shape mismatch");
  // Cholesky of G + ridge I, lower triangle.
  Matrix l(p, p);
  for (std::size_t j = 0; j < p; ++j) {
    double d = g(j, j) + ridge;
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > 0.0)) throw InvalidArgument("normal equations not positive definite");
    l(j, j) = std::sqrt(d);
    for (std::size_t i = j + 1; i < p; ++i) {
      double s = g(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }
  Matrix x(b.rows(), p);
  std::vector<double> y(p);
  for (std::size_t r = 0; r < b.rows(); ++r) {
    for (std::size_t i = 0; i < p; ++i) {
      double s = b(r, i);
      for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * y[k];
      y[i] = s / l(i, i);
    }
    for (std::size_t i = p; i-- > 0;) {
      double s = y[i];
      for (std::size_t k = i + 1; k < p; ++k) s -= l(k, i) * x(r, k);
      x(r, i) = s / l(i, i);
    }
  }
  return x;
}

Tensor3 Tensor3::from_slices(std::span<const Matrix> slices) {
  if (slices.empty()) return {};
  Tensor3 t(slices[0].rows(), slices[0].cols(), slices.size());
  for (std::size_t k = 0; k < slices.size(); ++k) {
    if (slices[k].rows() != t.n1_ || slices[k].cols() != t.n2_)
      throw InvalidArgument("tensor slices differ in shape");
    for (std::size_t j = 0; j < t.n2_; ++j)
      for (std::size_t i = 0; i < t.n1_; ++i) t(i, j, k) = slices[k](i, j);
  }
  return t;
}

double Tensor3::frobenius_norm() const { return std::sqrt(simd::dot(data_, data_)); }

}  // namespace stagg::linalg
