#include "sylten/sylvester.hpp"

#include <string>
#include <utility>

namespace sylten {

SylvesterOperator::SylvesterOperator(std::vector<DenseMatrix> factors)
    : factors_(std::move(factors)) {
  if (factors_.empty()) {
    throw ShapeError("SylvesterOperator: need at least one factor");
  }
  std::vector<std::int64_t> dims;
  dims.reserve(factors_.size());
  for (std::size_t n = 0; n < factors_.size(); ++n) {
    const DenseMatrix& a = factors_[n];
    if (a.rows() != a.cols()) {
      throw ShapeError("SylvesterOperator: factor " + std::to_string(n + 1) +
                       " is not square (" + std::to_string(a.rows()) + "x" +
                       std::to_string(a.cols()) + ")");
    }
    dims.push_back(a.rows());
  }
  shape_ = Shape(std::move(dims));
}

DenseTensor SylvesterOperator::apply(const DenseTensor& x) const {
  if (x.shape() != shape_) {
    throw ShapeError("SylvesterOperator::apply: operand shape " +
                     x.shape().to_string() + " does not match operator shape " +
                     shape_.to_string());
  }
  DenseTensor acc = mode_n_matrix_product(x, factors_[0], 1);
  for (int n = 1; n < order(); ++n) {
    DenseTensor term = mode_n_matrix_product(x, factors_[static_cast<std::size_t>(n)], n + 1);
    axpy_inplace(1.0, term, acc);
  }
  return acc;
}

DenseTensor SylvesterOperator::apply_transpose(const DenseTensor& x) const {
  if (x.shape() != shape_) {
    throw ShapeError("SylvesterOperator::apply_transpose: operand shape " +
                     x.shape().to_string() + " does not match operator shape " +
                     shape_.to_string());
  }
  DenseTensor acc = mode_n_matrix_product(x, factors_[0].transposed(), 1);
  for (int n = 1; n < order(); ++n) {
    DenseTensor term = mode_n_matrix_product(
        x, factors_[static_cast<std::size_t>(n)].transposed(), n + 1);
    axpy_inplace(1.0, term, acc);
  }
  return acc;
}

SylvesterOperator SylvesterOperator::dual() const {
  std::vector<DenseMatrix> t;
  t.reserve(factors_.size());
  for (const DenseMatrix& a : factors_) t.push_back(a.transposed());
  return SylvesterOperator(std::move(t));
}

DenseMatrix assemble_kronecker(const SylvesterOperator& op,
                               std::int64_t max_numel) {
  const std::int64_t m = op.shape().numel();
  if (m > max_numel) {
    throw SizeGuardError("assemble_kronecker: refusing to build a " +
                         std::to_string(m) + "x" + std::to_string(m) +
                         " dense matrix (guard " + std::to_string(max_numel) + ")");
  }

  DenseMatrix out(m, m);
  // Term n places A_n on mode n's index block and identities elsewhere:
  // nonzeros at (l + i*left + r*left*I_n, l + j*left + r*left*I_n).
  std::int64_t left = 1;
  for (int n = 0; n < op.order(); ++n) {
    const DenseMatrix& a = op.factor(n);
    const std::int64_t in = a.rows();
    const std::int64_t right = m / (left * in);
    for (std::int64_t r = 0; r < right; ++r) {
      const std::int64_t base = r * left * in;
      for (std::int64_t j = 0; j < in; ++j) {
        for (std::int64_t i = 0; i < in; ++i) {
          const double v = a(i, j);
          if (v == 0.0) continue;
          for (std::int64_t l = 0; l < left; ++l) {
            out(base + l + i * left, base + l + j * left) += v;
          }
        }
      }
    }
    left *= in;
  }
  return out;
}

}  // namespace sylten
