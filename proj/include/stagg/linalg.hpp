// SPDX-License-Identifier: Apache-2.0
#pragma once

// Dense column-major matrices and the factorizations used by the feature
// mappings: one-sided Jacobi SVD and CP-ALS for third-order tensors.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace stagg::linalg {

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[c * rows_ + r]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[c * rows_ + r]; }

  std::span<double> col(std::size_t c) { return {data_.data() + c * rows_, rows_}; }
  std::span<const double> col(std::size_t c) const { return {data_.data() + c * rows_, rows_}; }
  std::span<const double> data() const noexcept { return data_; }

  double frobenius_norm() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix transpose(const Matrix& a);
Matrix multiply(const Matrix& a, const Matrix& b);
/// A^T A
Matrix gram(const Matrix& a);
Matrix hadamard(const Matrix& a, const Matrix& b);

/// X = B (G + ridge I)^{-1} for symmetric positive semi-definite G.
Matrix solve_right_spd(const Matrix& b, const Matrix& g, double ridge);

struct SvdResult {
  Matrix u;                             // rows x p, orthonormal columns
  std::vector<double> singular_values;  // p values, non-increasing
  Matrix v;                             // cols x p, orthonormal columns
};

/// Top-p singular triplets by one-sided Jacobi. 1 <= p <= min(rows, cols).
SvdResult truncated_svd(const Matrix& m, std::size_t p);

/// U diag(s) V^T
Matrix reconstruct(const SvdResult& svd);

/// Dense n1 x n2 x n3 tensor, first index fastest.
class Tensor3 {
 public:
  Tensor3() = default;
  Tensor3(std::size_t n1, std::size_t n2, std::size_t n3)
      : n1_(n1), n2_(n2), n3_(n3), data_(n1 * n2 * n3, 0.0) {}

  /// Frontal slices T(:, :, k) = slices[k]; all slices must share a shape.
  static Tensor3 from_slices(std::span<const Matrix> slices);

  std::size_t dim1() const noexcept { return n1_; }
  std::size_t dim2() const noexcept { return n2_; }
  std::size_t dim3() const noexcept { return n3_; }

  double& operator()(std::size_t i, std::size_t j, std::size_t k) {
    return data_[i + n1_ * (j + n2_ * k)];
  }
  double operator()(std::size_t i, std::size_t j, std::size_t k) const {
    return data_[i + n1_ * (j + n2_ * k)];
  }
  /// Mode-1 fibre T(:, j, k).
  std::span<const double> fibre(std::size_t j, std::size_t k) const {
    return {data_.data() + n1_ * (j + n2_ * k), n1_};
  }

  double frobenius_norm() const;

 private:
  std::size_t n1_ = 0, n2_ = 0, n3_ = 0;
  std::vector<double> data_;
};

struct CpOptions {
  std::size_t rank = 5;
  std::size_t max_sweeps = 50;
  double tol = 1e-6;
  std::uint64_t seed = 1;
  double ridge = 1e-10;
};

struct CpResult {
  Matrix u;  // n1 x p, unit columns (or zero)
  Matrix v;  // n2 x p
  Matrix w;  // n3 x p
  std::vector<double> lambda;
  /// ||T - X|| / ||T|| after each sweep (absolute ||X|| when T = 0).
  std::vector<double> error_history;
};

/// CP decomposition by alternating least squares.
CpResult cp_als(const Tensor3& t, const CpOptions& options);

Tensor3 reconstruct(const CpResult& cp);

/// ||T - X|| relative to ||T||, absolute when ||T|| = 0.
double cp_error(const Tensor3& t, const CpResult& cp);

}  // namespace stagg::linalg
