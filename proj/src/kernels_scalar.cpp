#include <cmath>

#include "sylten/kernels.hpp"

namespace sylten::kernels::scalar {

double dot(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    s = std::fma(x[i], y[i], s);
  }
  return s;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = std::fma(a, x[i], y[i]);
  }
}

void axpby(double a, const double* x, double b, const double* y, double* out,
           std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = std::fma(a, x[i], b * y[i]);
  }
}

void scale(double a, const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = a * x[i];
  }
}

}  // namespace sylten::kernels::scalar
