#pragma once

#include <cstdint>
#include <vector>

#include "sylten/tensor.hpp"

namespace sylten {

/// Applicable pair (apply, apply_transpose) so the solver bodies run
/// identically on the plain operator and on its preconditioned form.
/// Implementations must be mutually adjoint: <apply(X), Y> = <X, apply_transpose(Y)>.
class OperatorHandle {
 public:
  virtual ~OperatorHandle() = default;

  virtual const Shape& shape() const = 0;
  virtual DenseTensor apply(const DenseTensor& x) const = 0;
  virtual DenseTensor apply_transpose(const DenseTensor& x) const = 0;
};

/// The linear map X -> sum_n X x_n A_n on tensors of the induced shape.
/// Immutable after construction; apply never materializes the equivalent
/// Kronecker-form matrix.
class SylvesterOperator final : public OperatorHandle {
 public:
  /// factors[n] is the square matrix acting on mode n+1; its size fixes
  /// dim n+1 of the operand shape.
  explicit SylvesterOperator(std::vector<DenseMatrix> factors);

  const Shape& shape() const override { return shape_; }
  int order() const { return shape_.order(); }
  const DenseMatrix& factor(int n) const {
    return factors_[static_cast<std::size_t>(n)];
  }
  const std::vector<DenseMatrix>& factors() const { return factors_; }

  DenseTensor apply(const DenseTensor& x) const override;
  DenseTensor apply_transpose(const DenseTensor& x) const override;

  /// Operator with every factor transposed (the dual map).
  SylvesterOperator dual() const;

 private:
  std::vector<DenseMatrix> factors_;
  Shape shape_;
};

/// Dense M x M matrix A with vec(apply(op, X)) = A * vec(X), where vec is
/// the column-major flattening: A = E x ... x A_1 + ... + A_N x ... x E.
/// Intended as a small-instance oracle; refuses to materialize above
/// max_numel elements per side.
DenseMatrix assemble_kronecker(const SylvesterOperator& op,
                               std::int64_t max_numel = 10000);

}  // namespace sylten
