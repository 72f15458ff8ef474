#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "silo/core/error.hpp"

namespace silo {

/// Compressed-row symmetric matrix built from (row, col, value) triplets.
class CsrMatrix {
 public:
  struct Triplet {
    std::size_t row, col;
    double value;
  };

  CsrMatrix(std::size_t n, std::vector<Triplet> triplets) : n_(n), row_start_(n + 1, 0) {
    std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
      return std::tie(a.row, a.col) < std::tie(b.row, b.col);
    });
    for (std::size_t k = 0; k < triplets.size();) {
      const std::size_t r = triplets[k].row, c = triplets[k].col;
      double sum = 0.0;
      for (; k < triplets.size() && triplets[k].row == r && triplets[k].col == c; ++k)
        sum += triplets[k].value;
      cols_.push_back(c);
      values_.push_back(sum);
      ++row_start_[r + 1];
    }
    std::partial_sum(row_start_.begin(), row_start_.end(), row_start_.begin());
  }

  std::size_t size() const { return n_; }
  std::size_t nonzeros() const { return values_.size(); }

  void multiply(std::span<const double> x, std::span<double> y) const {
    for (std::size_t r = 0; r < n_; ++r) {
      double s = 0.0;
      for (std::size_t k = row_start_[r]; k < row_start_[r + 1]; ++k) s += values_[k] * x[cols_[k]];
      y[r] = s;
    }
  }

  std::vector<double> operator*(const std::vector<double>& x) const {
    std::vector<double> y(n_);
    multiply(x, y);
    return y;
  }

  double at(std::size_t r, std::size_t c) const {
    for (std::size_t k = row_start_[r]; k < row_start_[r + 1]; ++k)
      if (cols_[k] == c) return values_[k];
    return 0.0;
  }

 private:
  std::size_t n_;
  std::vector<std::size_t> row_start_;
  std::vector<std::size_t> cols_;
  std::vector<double> values_;
};

struct CgOptions {
  double tolerance = 1e-10;    ///< on ||b - A x|| / ||b||
  std::size_t max_iter_factor = 10;  ///< max iterations = factor * n
};

struct CgResult {
  std::vector<double> x;
  double relative_residual = 0.0;
  std::size_t iterations = 0;
};

namespace detail {

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline void remove_mean(std::span<double> v) {
  if (v.empty()) return;
  const double m = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  for (double& x : v) x -= m;
}

}  // namespace detail

/// Conjugate gradient for a symmetric positive-semidefinite matrix whose kernel
/// is spanned by the constant vector (pure Neumann stiffness matrices).
///
/// The constant component is projected out of the right-hand side, of every
/// residual and of the iterate, so the method runs on the orthogonal
/// complement where the matrix is definite. `b` must already be compatible
/// (sum close to zero); the caller checks that.
inline CgResult projected_cg(const CsrMatrix& A, std::vector<double> b, std::vector<double> x0,
                             const CgOptions& opts = {}) {
  const std::size_t n = A.size();
  detail::require(b.size() == n, "right-hand side size mismatch");
  if (x0.empty()) x0.assign(n, 0.0);
  detail::require(x0.size() == n, "initial guess size mismatch");

  detail::remove_mean(b);
  detail::remove_mean(x0);
  CgResult res;
  res.x = std::move(x0);
  const double bnorm = std::sqrt(detail::dot(b, b));
  if (bnorm == 0.0) {
    std::fill(res.x.begin(), res.x.end(), 0.0);
    return res;
  }

  std::vector<double> r(n), p(n), Ap(n);
  A.multiply(res.x, Ap);
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - Ap[i];
  detail::remove_mean(r);
  p = r;
  double rr = detail::dot(r, r);
  const std::size_t max_iter = opts.max_iter_factor * n;

  auto true_residual = [&] {
    A.multiply(res.x, Ap);
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - Ap[i];
    detail::remove_mean(r);
    return detail::dot(r, r);
  };

  for (res.iterations = 0; res.iterations < max_iter; ++res.iterations) {
    if (std::sqrt(rr) <= opts.tolerance * bnorm) {
      // Confirm with the true residual; restart from it if rounding drifted.
      detail::remove_mean(res.x);
      rr = true_residual();
      if (std::sqrt(rr) <= opts.tolerance * bnorm) break;
      p = r;
    }
    A.multiply(p, Ap);
    const double pAp = detail::dot(p, Ap);
    if (!(pAp > 0.0)) break;
    const double step = rr / pAp;
    for (std::size_t i = 0; i < n; ++i) {
      res.x[i] += step * p[i];
      r[i] -= step * Ap[i];
    }
    detail::remove_mean(r);
    const double rr_new = detail::dot(r, r);
    const double beta = rr_new / rr;
    rr = rr_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
  }
  detail::remove_mean(res.x);
  res.relative_residual = std::sqrt(true_residual()) / bnorm;
  if (res.relative_residual > opts.tolerance)
    throw SolverError("projected CG did not converge: relative residual " +
                      std::to_string(res.relative_residual) + " after " +
                      std::to_string(res.iterations) + " iterations");
  return res;
}

}  // namespace silo
