// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>

#include "stagg/errors.hpp"
#include "stagg/linalg.hpp"
#include "stagg/rng.hpp"
#include "stagg/simd/kernels.hpp"

namespace stagg::linalg {
namespace {

Matrix random_factor(std::size_t rows, std::size_t rank, Rng& rng) {
  Matrix f(rows, rank);
  for (std::size_t c = 0; c < rank; ++c)
    for (std::size_t r = 0; r < rows; ++r) f(r, c) = rng.uniform(-0.5, 0.5);
  return f;
}

// Moves column norms into lambda. Zero columns stay zero with lambda 0.
void normalize_columns(Matrix& f, std::vector<double>& lambda) {
  for (std::size_t c = 0; c < f.cols(); ++c) {
    const double norm = std::sqrt(simd::dot(f.col(c), f.col(c)));
    lambda[c] = norm;
    if (norm > 0.0)
      for (double& x : f.col(c)) x /= norm;
  }
}

// Mode-1 MTTKRP: M(a, r) = sum_{b,k} T(a,b,k) V(b,r) W(k,r)
Matrix mttkrp_mode1(const Tensor3& t, const Matrix& v, const Matrix& w) {
  const std::size_t rank = v.cols();
  Matrix out(t.dim1(), rank);
  for (std::size_t k = 0; k < t.dim3(); ++k)
    for (std::size_t b = 0; b < t.dim2(); ++b) {
      const auto fibre = t.fibre(b, k);
      for (std::size_t r = 0; r < rank; ++r)
        if (const double coef = v(b, r) * w(k, r); coef != 0.0) simd::axpy(coef, fibre, out.col(r));
    }
  return out;
}

// D(b, k, r) = <T(:, b, k), U(:, r)>, stored as D[r](b, k).
std::vector<Matrix> project_mode1(const Tensor3& t, const Matrix& u) {
  std::vector<Matrix> d(u.cols(), Matrix(t.dim2(), t.dim3()));
  for (std::size_t k = 0; k < t.dim3(); ++k)
    for (std::size_t b = 0; b < t.dim2(); ++b) {
      const auto fibre = t.fibre(b, k);
      for (std::size_t r = 0; r < u.cols(); ++r) d[r](b, k) = simd::dot(fibre, u.col(r));
    }
  return d;
}

}  // namespace

Tensor3 reconstruct(const CpResult& cp) {
  Tensor3 x(cp.u.rows(), cp.v.rows(), cp.w.rows());
  for (std::size_t k = 0; k < x.dim3(); ++k)
    for (std::size_t b = 0; b < x.dim2(); ++b)
      for (std::size_t r = 0; r < cp.lambda.size(); ++r) {
        const double coef = cp.lambda[r] * cp.v(b, r) * cp.w(k, r);
        for (std::size_t a = 0; a < x.dim1(); ++a) x(a, b, k) += coef * cp.u(a, r);
      }
  return x;
}

double cp_error(const Tensor3& t, const CpResult& cp) {
  double residual = 0.0;
  std::vector<double> column(t.dim1());
  for (std::size_t k = 0; k < t.dim3(); ++k)
    for (std::size_t b = 0; b < t.dim2(); ++b) {
      const auto fibre = t.fibre(b, k);
      std::copy(fibre.begin(), fibre.end(), column.begin());
      for (std::size_t r = 0; r < cp.lambda.size(); ++r)
        simd::axpy(-cp.lambda[r] * cp.v(b, r) * cp.w(k, r), cp.u.col(r), column);
      residual += simd::dot(column, column);
    }
  const double norm = t.frobenius_norm();
  return norm > 0.0 ? std::sqrt(residual) / norm : std::sqrt(residual);
}

CpResult cp_als(const Tensor3& t, const CpOptions& options) {
  if (options.rank < 1) throw InvalidArgument("CP rank must be >= 1");
  const std::size_t rank = options.rank;
  Rng rng(options.seed, "cp-als-init");
  CpResult cp;
  cp.u = random_factor(t.dim1(), rank, rng);
  cp.v = random_factor(t.dim2(), rank, rng);
  cp.w = random_factor(t.dim3(), rank, rng);
  cp.lambda.assign(rank, 1.0);
  normalize_columns(cp.v, cp.lambda);
  normalize_columns(cp.w, cp.lambda);
  cp.lambda.assign(rank, 1.0);

  for (std::size_t sweep = 0; sweep < options.max_sweeps; ++sweep) {
    // U = T_(1) (W kr V) ((V'V) * (W'W))^-1
    cp.u = solve_right_spd(mttkrp_mode1(t, cp.v, cp.w), hadamard(gram(cp.v), gram(cp.w)),
                           options.ridge);
    normalize_columns(cp.u, cp.lambda);

    const auto proj = project_mode1(t, cp.u);
    Matrix m2(t.dim2(), rank);
    for (std::size_t r = 0; r < rank; ++r)
      for (std::size_t b = 0; b < t.dim2(); ++b) {
        double acc = 0.0;
        for (std::size_t k = 0; k < t.dim3(); ++k) acc += proj[r](b, k) * cp.w(k, r);
        m2(b, r) = acc;
      }
    cp.v = solve_right_spd(m2, hadamard(gram(cp.u), gram(cp.w)), options.ridge);
    normalize_columns(cp.v, cp.lambda);

    Matrix m3(t.dim3(), rank);
    for (std::size_t r = 0; r < rank; ++r)
      for (std::size_t k = 0; k < t.dim3(); ++k) {
        double acc = 0.0;
        for (std::size_t b = 0; b < t.dim2(); ++b) acc += proj[r](b, k) * cp.v(b, r);
        m3(k, r) = acc;
      }
    cp.w = solve_right_spd(m3, hadamard(gram(cp.u), gram(cp.v)), options.ridge);
    normalize_columns(cp.w, cp.lambda);

    cp.error_history.push_back(cp_error(t, cp));
    const std::size_t h = cp.error_history.size();
    if (h >= 2 && std::abs(cp.error_history[h - 2] - cp.error_history[h - 1]) < options.tol) break;
  }
  return cp;
}

}  // namespace stagg::linalg
