#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sylten/tensor.hpp"

namespace sylten {

/// LU factorization with partial pivoting of a small square matrix,
/// kept so the inverse is only ever applied through triangular solves.
class PivotedLu {
 public:
  PivotedLu() = default;

  /// Throws SingularPreconditionerError(factor_index) on a zero pivot.
  static PivotedLu factor(const DenseMatrix& a, int factor_index = -1,
                          double pivot_tol = 0.0);

  std::int64_t size() const { return lu_.rows(); }

  /// x := A^-1 x
  void solve_in_place(std::span<double> x) const;
  /// x := A^-T x
  void solve_transpose_in_place(std::span<double> x) const;

 private:
  DenseMatrix lu_;
  std::vector<std::int64_t> perm_;  // row permutation: PA = LU
};

}  // namespace sylten
