#include "sylten/dense_lu.hpp"

#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "sylten/errors.hpp"

namespace sylten {

PivotedLu PivotedLu::factor(const DenseMatrix& a, int factor_index,
                            double pivot_tol) {
  if (a.rows() != a.cols()) {
    throw ShapeError("PivotedLu: matrix is not square");
  }
  const std::int64_t n = a.rows();
  PivotedLu lu;
  lu.lu_ = a;
  lu.perm_.resize(static_cast<std::size_t>(n));
  std::iota(lu.perm_.begin(), lu.perm_.end(), 0);

  double amax = 0.0;
  for (double v : a.data()) amax = std::max(amax, std::abs(v));
  const double guard = pivot_tol > 0.0 ? pivot_tol : 1e-14 * (amax > 0.0 ? amax : 1.0);

  DenseMatrix& m = lu.lu_;
  for (std::int64_t k = 0; k < n; ++k) {
    std::int64_t piv = k;
    double best = std::abs(m(k, k));
    for (std::int64_t i = k + 1; i < n; ++i) {
      if (std::abs(m(i, k)) > best) {
        best = std::abs(m(i, k));
        piv = i;
      }
    }
    if (best <= guard) {
      throw SingularPreconditionerError(
          factor_index, "PivotedLu: singular matrix at column " +
                            std::to_string(k + 1) +
                            (factor_index >= 0
                                 ? " (preconditioner factor " +
                                       std::to_string(factor_index + 1) + ")"
                                 : ""));
    }
    if (piv != k) {
      std::swap(lu.perm_[static_cast<std::size_t>(k)],
                lu.perm_[static_cast<std::size_t>(piv)]);
      for (std::int64_t j = 0; j < n; ++j) std::swap(m(k, j), m(piv, j));
    }
    for (std::int64_t i = k + 1; i < n; ++i) {
      m(i, k) /= m(k, k);
      const double lik = m(i, k);
      for (std::int64_t j = k + 1; j < n; ++j) {
        m(i, j) -= lik * m(k, j);
      }
    }
  }
  return lu;
}

void PivotedLu::solve_in_place(std::span<double> x) const {
  const std::int64_t n = size();
  std::vector<double> b(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    b[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(perm_[static_cast<std::size_t>(i)])];
  }
  // Ly = Pb (unit lower), then Ux = y.
  for (std::int64_t i = 1; i < n; ++i) {
    double s = b[static_cast<std::size_t>(i)];
    for (std::int64_t j = 0; j < i; ++j) s -= lu_(i, j) * b[static_cast<std::size_t>(j)];
    b[static_cast<std::size_t>(i)] = s;
  }
  for (std::int64_t i = n - 1; i >= 0; --i) {
    double s = b[static_cast<std::size_t>(i)];
    for (std::int64_t j = i + 1; j < n; ++j) s -= lu_(i, j) * b[static_cast<std::size_t>(j)];
    b[static_cast<std::size_t>(i)] = s / lu_(i, i);
  }
  for (std::int64_t i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = b[static_cast<std::size_t>(i)];
}

void PivotedLu::solve_transpose_in_place(std::span<double> x) const {
  const std::int64_t n = size();
  // A^T = U^T L^T P, so solve U^T y = x, L^T z = y, then x = P^T z.
  std::vector<double> b(x.begin(), x.end());
  for (std::int64_t i = 0; i < n; ++i) {
    double s = b[static_cast<std::size_t>(i)];
    for (std::int64_t j = 0; j < i; ++j) s -= lu_(j, i) * b[static_cast<std::size_t>(j)];
    b[static_cast<std::size_t>(i)] = s / lu_(i, i);
  }
  for (std::int64_t i = n - 1; i >= 0; --i) {
    double s = b[static_cast<std::size_t>(i)];
    for (std::int64_t j = i + 1; j < n; ++j) s -= lu_(j, i) * b[static_cast<std::size_t>(j)];
    b[static_cast<std::size_t>(i)] = s;
  }
  for (std::int64_t i = 0; i < n; ++i) {
    x[static_cast<std::size_t>(perm_[static_cast<std::size_t>(i)])] = b[static_cast<std::size_t>(i)];
  }
}

}  // namespace sylten
