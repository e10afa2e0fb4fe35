#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "sylten/errors.hpp"

namespace sylten {

/// Dimensions I_1 x ... x I_N of a dense tensor. Order 0 (an empty dims
/// list) denotes a scalar and only arises as the result of contracting a
/// one-way tensor; everything the solvers touch has order >= 1.
class Shape {
 public:
  Shape() = default;
  explicit Shape(std::vector<std::int64_t> dims);
  Shape(std::initializer_list<std::int64_t> dims);

  int order() const { return static_cast<int>(dims_.size()); }
  std::int64_t dim(int k) const { return dims_[static_cast<std::size_t>(k)]; }
  const std::vector<std::int64_t>& dims() const { return dims_; }
  std::int64_t numel() const;

  bool operator==(const Shape& other) const { return dims_ == other.dims_; }
  bool operator!=(const Shape& other) const { return !(*this == other); }

  std::string to_string() const;  // "10x10x10"

 private:
  std::vector<std::int64_t> dims_;
};

/// Dense real matrix, column-major.
class DenseMatrix {
 public:
  DenseMatrix() : rows_(0), cols_(0) {}
  DenseMatrix(std::int64_t rows, std::int64_t cols, double fill = 0.0);
  static DenseMatrix identity(std::int64_t n);
  static DenseMatrix from_data(std::int64_t rows, std::int64_t cols,
                               std::vector<double> colmajor);

  std::int64_t rows() const { return rows_; }
  std::int64_t cols() const { return cols_; }

  double& operator()(std::int64_t i, std::int64_t j) {
    return data_[static_cast<std::size_t>(i + j * rows_)];
  }
  double operator()(std::int64_t i, std::int64_t j) const {
    return data_[static_cast<std::size_t>(i + j * rows_)];
  }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  DenseMatrix transposed() const;

 private:
  std::int64_t rows_, cols_;
  std::vector<double> data_;
};

/// Dense N-way real tensor, column-major (first index varies fastest).
/// Values are immutable by convention once an operation returns them;
/// the mutable accessors exist for construction and for the in-place
/// update helpers below.
class DenseTensor {
 public:
  DenseTensor() = default;
  explicit DenseTensor(Shape shape, double fill = 0.0);
  static DenseTensor zeros(Shape shape) { return DenseTensor(std::move(shape)); }
  static DenseTensor ones(Shape shape) { return DenseTensor(std::move(shape), 1.0); }
  static DenseTensor from_data(Shape shape, std::vector<double> colmajor);

  const Shape& shape() const { return shape_; }
  std::int64_t numel() const { return static_cast<std::int64_t>(data_.size()); }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  /// Multi-index access, zero-based.
  double& at(std::span<const std::int64_t> index);
  double at(std::span<const std::int64_t> index) const;
  double& at(std::initializer_list<std::int64_t> index) {
    return at(std::span<const std::int64_t>(index.begin(), index.size()));
  }
  double at(std::initializer_list<std::int64_t> index) const {
    return const_cast<DenseTensor*>(this)->at(index);
  }

 private:
  Shape shape_;
  std::vector<double> data_;
};

// ---------------------------------------------------------------------------
// Tensor algebra. All operations are pure (inputs untouched) and thread-safe.

/// n-mode matrix product X x_n A, mode is one-based (1..N).
/// A must have as many columns as dim n of X; the result replaces dim n
/// by A.rows().
DenseTensor mode_n_matrix_product(const DenseTensor& x, const DenseMatrix& a,
                                  int mode);

/// n-mode vector product: contracts mode n against v, dropping the mode.
/// For an order-1 tensor the result is an order-0 (scalar) tensor.
DenseTensor mode_n_vector_product(const DenseTensor& x,
                                  std::span<const double> v, int mode);

/// <X, Y> = sum of elementwise products. Shapes must match.
double inner(const DenseTensor& x, const DenseTensor& y);

/// sqrt(<X, X>)
double norm(const DenseTensor& x);

/// Matrix of pairwise inner products of last-mode slices:
/// result(i, j) = <X_i, Y_j>. X and Y must agree on all leading dims;
/// taking the trace of the result for equal last dims gives inner(x, y).
DenseMatrix boxtimes(const DenseTensor& x, const DenseTensor& y);

/// alpha*X + beta*Y elementwise.
DenseTensor lincomb(double alpha, const DenseTensor& x, double beta,
                    const DenseTensor& y);

/// Column-major flattening; consistent with the Kronecker ordering used
/// by assemble_kronecker (identity factors on the left for mode 1).
std::vector<double> vectorize(const DenseTensor& x);

/// Order-(N+1) tensor whose last-mode slices are the given order-N tensors.
DenseTensor stack_last(std::span<const DenseTensor> slices);

// In-place update helpers used by the solver loops.
void axpy_inplace(double a, const DenseTensor& x, DenseTensor& y);  // y += a*x
void scale_inplace(double a, DenseTensor& x);                       // x *= a

}  // namespace sylten
