#include "sylten/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <utility>

#include "sylten/kernels.hpp"

namespace sylten {

namespace {

std::string dims_string(std::span<const std::int64_t> dims) {
  if (dims.empty()) return "scalar";
  std::string s;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (i) s += 'x';
    s += std::to_string(dims[i]);
  }
  return s;
}

void require_same_shape(const DenseTensor& x, const DenseTensor& y,
                        const char* op) {
  if (x.shape() != y.shape()) {
    throw ShapeError(std::string(op) + ": shapes differ, " +
                     x.shape().to_string() + " vs " + y.shape().to_string());
  }
}

// Sizes of the index blocks below, at and above mode n (one-based).
struct ModeSplit {
  std::int64_t left, mid, right;
};

ModeSplit split_at_mode(const Shape& shape, int mode) {
  ModeSplit s{1, shape.dim(mode - 1), 1};
  for (int k = 0; k < mode - 1; ++k) s.left *= shape.dim(k);
  for (int k = mode; k < shape.order(); ++k) s.right *= shape.dim(k);
  return s;
}

}  // namespace

Shape::Shape(std::vector<std::int64_t> dims) : dims_(std::move(dims)) {
  for (std::int64_t d : dims_) {
    if (d < 1) {
      throw ShapeError("Shape: every dimension must be >= 1, got " +
                       dims_string(dims_));
    }
  }
}

Shape::Shape(std::initializer_list<std::int64_t> dims)
    : Shape(std::vector<std::int64_t>(dims)) {}

std::int64_t Shape::numel() const {
  std::int64_t n = 1;
  for (std::int64_t d : dims_) n *= d;
  return n;
}

std::string Shape::to_string() const { return dims_string(dims_); }

DenseMatrix::DenseMatrix(std::int64_t rows, std::int64_t cols, double fill)
    : rows_(rows), cols_(cols),
      data_(static_cast<std::size_t>(rows * cols), fill) {
  if (rows < 1 || cols < 1) {
    throw ShapeError("DenseMatrix: dimensions must be positive");
  }
}

DenseMatrix DenseMatrix::identity(std::int64_t n) {
  DenseMatrix e(n, n);
  for (std::int64_t i = 0; i < n; ++i) e(i, i) = 1.0;
  return e;
}

DenseMatrix DenseMatrix::from_data(std::int64_t rows, std::int64_t cols,
                                   std::vector<double> colmajor) {
  if (static_cast<std::int64_t>(colmajor.size()) != rows * cols) {
    throw ShapeError("DenseMatrix::from_data: buffer length does not match");
  }
  DenseMatrix m(rows, cols);
  m.data_ = std::move(colmajor);
  return m;
}

DenseMatrix DenseMatrix::transposed() const {
  DenseMatrix t(cols_, rows_);
  for (std::int64_t j = 0; j < cols_; ++j)
    for (std::int64_t i = 0; i < rows_; ++i) t(j, i) = (*this)(i, j);
  return t;
}

DenseTensor::DenseTensor(Shape shape, double fill)
    : shape_(std::move(shape)),
      data_(static_cast<std::size_t>(shape_.numel()), fill) {}

DenseTensor DenseTensor::from_data(Shape shape, std::vector<double> colmajor) {
  if (static_cast<std::int64_t>(colmajor.size()) != shape.numel()) {
    throw ShapeError("DenseTensor::from_data: buffer length " +
                     std::to_string(colmajor.size()) + " does not match shape " +
                     shape.to_string());
  }
  DenseTensor t(std::move(shape));
  t.data_ = std::move(colmajor);
  return t;
}

double& DenseTensor::at(std::span<const std::int64_t> index) {
  std::int64_t offset = 0, stride = 1;
  for (int k = 0; k < shape_.order(); ++k) {
    offset += index[static_cast<std::size_t>(k)] * stride;
    stride *= shape_.dim(k);
  }
  return data_[static_cast<std::size_t>(offset)];
}

double DenseTensor::at(std::span<const std::int64_t> index) const {
  return const_cast<DenseTensor*>(this)->at(index);
}

DenseTensor mode_n_matrix_product(const DenseTensor& x, const DenseMatrix& a,
                                  int mode) {
  const Shape& shape = x.shape();
  if (mode < 1 || mode > shape.order()) {
    throw ShapeError("mode-" + std::to_string(mode) +
                     " product: tensor has order " +
                     std::to_string(shape.order()));
  }
  if (a.cols() != shape.dim(mode - 1)) {
    throw ShapeError("mode-" + std::to_string(mode) + " product: matrix has " +
                     std::to_string(a.cols()) + " columns but tensor dim " +
                     std::to_string(mode) + " is " +
                     std::to_string(shape.dim(mode - 1)));
  }

  const auto [left, mid, right] = split_at_mode(shape, mode);
  const std::int64_t jdim = a.rows();

  std::vector<std::int64_t> out_dims = shape.dims();
  out_dims[static_cast<std::size_t>(mode - 1)] = jdim;
  DenseTensor out(Shape(std::move(out_dims)));

  const double* xd = x.data().data();
  const double* ad = a.data().data();
  double* od = out.data().data();

  if (left == 1) {
    // Fibers of mode 1 are contiguous: accumulate columns of A scaled by
    // the fiber entries, so the inner loop runs over the contiguous output.
    for (std::int64_t r = 0; r < right; ++r) {
      const double* xr = xd + r * mid;
      double* orow = od + r * jdim;
      for (std::int64_t m = 0; m < mid; ++m) {
        kernels::axpy(xr[m], ad + m * jdim, orow, static_cast<std::size_t>(jdim));
      }
    }
  } else {
    // Each slab of `left` consecutive entries shares all indices except
    // mode n; accumulate slabs scaled by matrix entries.
    for (std::int64_t r = 0; r < right; ++r) {
      const double* xr = xd + r * left * mid;
      double* oslab = od + r * left * jdim;
      for (std::int64_t j = 0; j < jdim; ++j) {
        double* ocol = oslab + j * left;
        for (std::int64_t m = 0; m < mid; ++m) {
          kernels::axpy(ad[j + m * jdim], xr + m * left, ocol,
                        static_cast<std::size_t>(left));
        }
      }
    }
  }
  return out;
}

DenseTensor mode_n_vector_product(const DenseTensor& x,
                                  std::span<const double> v, int mode) {
  const Shape& shape = x.shape();
  if (mode < 1 || mode > shape.order()) {
    throw ShapeError("mode-" + std::to_string(mode) +
                     " vector product: tensor has order " +
                     std::to_string(shape.order()));
  }
  if (static_cast<std::int64_t>(v.size()) != shape.dim(mode - 1)) {
    throw ShapeError("mode-" + std::to_string(mode) +
                     " vector product: vector length " +
                     std::to_string(v.size()) + " but tensor dim " +
                     std::to_string(mode) + " is " +
                     std::to_string(shape.dim(mode - 1)));
  }

  const auto [left, mid, right] = split_at_mode(shape, mode);

  std::vector<std::int64_t> out_dims;
  out_dims.reserve(static_cast<std::size_t>(shape.order() - 1));
  for (int k = 0; k < shape.order(); ++k) {
    if (k != mode - 1) out_dims.push_back(shape.dim(k));
  }
  DenseTensor out{Shape(std::move(out_dims))};

  const double* xd = x.data().data();
  double* od = out.data().data();

  if (left == 1) {
    for (std::int64_t r = 0; r < right; ++r) {
      od[r] = kernels::dot(xd + r * mid, v.data(), static_cast<std::size_t>(mid));
    }
  } else {
    for (std::int64_t r = 0; r < right; ++r) {
      const double* xr = xd + r * left * mid;
      double* oslab = od + r * left;
      for (std::int64_t m = 0; m < mid; ++m) {
        kernels::axpy(v[static_cast<std::size_t>(m)], xr + m * left, oslab,
                      static_cast<std::size_t>(left));
      }
    }
  }
  return out;
}

double inner(const DenseTensor& x, const DenseTensor& y) {
  require_same_shape(x, y, "inner");
  return kernels::dot(x.data().data(), y.data().data(), x.data().size());
}

double norm(const DenseTensor& x) {
  return std::sqrt(kernels::dot(x.data().data(), x.data().data(), x.data().size()));
}

DenseMatrix boxtimes(const DenseTensor& x, const DenseTensor& y) {
  if (x.shape().order() != y.shape().order() || x.shape().order() < 1) {
    throw ShapeError("boxtimes: operands must have equal order >= 1");
  }
  const int order = x.shape().order();
  for (int k = 0; k + 1 < order; ++k) {
    if (x.shape().dim(k) != y.shape().dim(k)) {
      throw ShapeError("boxtimes: leading dims differ at mode " +
                       std::to_string(k + 1) + ": " + x.shape().to_string() +
                       " vs " + y.shape().to_string());
    }
  }
  const std::int64_t nx = x.shape().dim(order - 1);
  const std::int64_t ny = y.shape().dim(order - 1);
  const std::int64_t slice = x.numel() / nx;

  DenseMatrix out(nx, ny);
  const double* xd = x.data().data();
  const double* yd = y.data().data();
  for (std::int64_t j = 0; j < ny; ++j) {
    for (std::int64_t i = 0; i < nx; ++i) {
      out(i, j) = kernels::dot(xd + i * slice, yd + j * slice,
                               static_cast<std::size_t>(slice));
    }
  }
  return out;
}

DenseTensor lincomb(double alpha, const DenseTensor& x, double beta,
                    const DenseTensor& y) {
  require_same_shape(x, y, "lincomb");
  DenseTensor out(x.shape());
  kernels::axpby(alpha, x.data().data(), beta, y.data().data(),
                 out.data().data(), x.data().size());
  return out;
}

std::vector<double> vectorize(const DenseTensor& x) {
  return std::vector<double>(x.data().begin(), x.data().end());
}

DenseTensor stack_last(std::span<const DenseTensor> slices) {
  if (slices.empty()) {
    throw ShapeError("stack_last: need at least one slice");
  }
  std::vector<std::int64_t> dims = slices[0].shape().dims();
  dims.push_back(static_cast<std::int64_t>(slices.size()));
  DenseTensor out{Shape(std::move(dims))};
  const std::size_t slice_len = slices[0].data().size();
  double* od = out.data().data();
  for (std::size_t i = 0; i < slices.size(); ++i) {
    require_same_shape(slices[i], slices[0], "stack_last");
    std::memcpy(od + i * slice_len, slices[i].data().data(),
                slice_len * sizeof(double));
  }
  return out;
}

void axpy_inplace(double a, const DenseTensor& x, DenseTensor& y) {
  require_same_shape(x, y, "axpy_inplace");
  kernels::axpy(a, x.data().data(), y.data().data(), y.data().size());
}

void scale_inplace(double a, DenseTensor& x) {
  kernels::scale(a, x.data().data(), x.data().data(), x.data().size());
}

}  // namespace sylten
