#include "sylten/problems.hpp"

#include <cmath>
#include <cstdio>
#include <utility>
#include <vector>

namespace sylten {

namespace {

// splitmix64: tiny, platform-independent generator so instances are
// reproducible bit-for-bit across standard libraries.
struct SplitMix64 {
  std::uint64_t state;

  std::uint64_t next_u64() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [-1, 1).
  double next_signed_unit() {
    const double u = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    return 2.0 * u - 1.0;
  }
};

ProblemInstance instance_from(std::vector<DenseMatrix> factors,
                              DenseTensor exact, std::string label) {
  SylvesterOperator op(std::move(factors));
  DenseTensor rhs = op.apply(exact);
  return {std::move(op), std::move(rhs), std::move(exact), std::move(label)};
}

}  // namespace

DenseMatrix poisson_matrix(int p, double h) {
  if (p < 1) throw ConfigError("poisson_matrix: p must be >= 1");
  if (h <= 0.0) throw ConfigError("poisson_matrix: h must be positive");
  const double s = 1.0 / (h * h);
  DenseMatrix a(p, p);
  for (int i = 0; i < p; ++i) {
    a(i, i) = 2.0 * s;
    if (i + 1 < p) {
      a(i, i + 1) = -s;
      a(i + 1, i) = -s;
    }
  }
  return a;
}

DenseMatrix convection_diffusion_matrix(int p, double v, double c) {
  if (p < 4) throw ConfigError("convection_diffusion_matrix: p must be >= 4");
  const double h = 1.0 / (p + 1);
  const double s = v / (h * h);
  const double t = c / (4.0 * h);
  DenseMatrix a(p, p);
  for (int i = 0; i < p; ++i) {
    a(i, i) = 2.0 * s + 3.0 * t;
    if (i + 1 < p) {
      a(i, i + 1) = -s - 5.0 * t;
      a(i + 1, i) = -s + t;
    }
    if (i + 2 < p) a(i, i + 2) = t;
  }
  return a;
}

DenseMatrix fdm2d_matrix_general(
    int n0, const std::function<double(double, double)>& px,
    const std::function<double(double, double)>& qy,
    const std::function<double(double, double)>& g) {
  if (n0 < 1) throw ConfigError("fdm2d_matrix: n0 must be >= 1");
  const double h = 1.0 / (n0 + 1);
  const double s = 1.0 / (h * h);
  const double c = 1.0 / (2.0 * h);
  const int n = n0 * n0;
  DenseMatrix a(n, n);

  // Grid node (i, j) -> row j*n0 + i, x varying fastest.
  for (int j = 0; j < n0; ++j) {
    const double y = (j + 1) * h;
    for (int i = 0; i < n0; ++i) {
      const double x = (i + 1) * h;
      const int k = j * n0 + i;
      a(k, k) = 4.0 * s + g(x, y);
      if (i > 0) a(k, k - 1) = -s - c * px(x, y);
      if (i + 1 < n0) a(k, k + 1) = -s + c * px(x, y);
      if (j > 0) a(k, k - n0) = -s - c * qy(x, y);
      if (j + 1 < n0) a(k, k + n0) = -s + c * qy(x, y);
    }
  }
  return a;
}

DenseMatrix fdm2d_matrix(int n0) {
  return fdm2d_matrix_general(
      n0, [](double x, double y) { return -std::exp(x * y); },
      [](double x, double y) { return std::sin(x * y); },
      [](double x, double y) { return y * y - x * x; });
}

ProblemInstance make_poisson3d(int p) {
  const double h = 1.0 / (p + 1);
  std::vector<DenseMatrix> factors(3, poisson_matrix(p, h));
  Shape shape{p, p, p};
  return instance_from(std::move(factors), DenseTensor::ones(shape), "poisson3d");
}

namespace {

std::string trim_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", x);
  return buf;
}

}  // namespace

ProblemInstance make_convection_diffusion(double v, std::array<double, 3> c,
                                          int p) {
  std::vector<DenseMatrix> factors;
  factors.reserve(3);
  for (double cn : c) factors.push_back(convection_diffusion_matrix(p, v, cn));
  Shape shape{p, p, p};
  std::string label = "convdiff_v" + trim_number(v) + "_c" + trim_number(c[0]) +
                      "-" + trim_number(c[1]) + "-" + trim_number(c[2]);
  return instance_from(std::move(factors), DenseTensor::ones(shape),
                       std::move(label));
}

ProblemInstance make_fdm2d() {
  std::vector<DenseMatrix> factors;
  factors.reserve(3);
  for (int i = 1; i <= 3; ++i) factors.push_back(fdm2d_matrix(1 + i));
  Shape shape{4, 9, 16};
  return instance_from(std::move(factors), DenseTensor::ones(shape), "fdm2d");
}

ProblemInstance make_random(const Shape& shape, std::uint64_t seed,
                            Conditioning conditioning) {
  SplitMix64 rng{seed ^ 0x53594c54454e0001ULL};

  std::vector<DenseMatrix> factors;
  factors.reserve(static_cast<std::size_t>(shape.order()));
  for (int n = 0; n < shape.order(); ++n) {
    const std::int64_t p = shape.dim(n);
    DenseMatrix a(p, p);
    for (std::int64_t j = 0; j < p; ++j) {
      for (std::int64_t i = 0; i < p; ++i) {
        a(i, j) = rng.next_signed_unit();
      }
    }
    if (conditioning == Conditioning::WellPosed) {
      // Strictly dominant rows in every factor make the Kronecker-form
      // matrix strictly diagonally dominant, hence nonsingular.
      for (std::int64_t i = 0; i < p; ++i) {
        double off = 0.0;
        for (std::int64_t j = 0; j < p; ++j) {
          if (j != i) off += std::abs(a(i, j));
        }
        a(i, i) = off + 0.5 + 0.5 * (rng.next_signed_unit() + 1.0);
      }
    }
    factors.push_back(std::move(a));
  }

  DenseTensor exact(shape);
  for (double& v : exact.data()) v = rng.next_signed_unit();

  return instance_from(std::move(factors), std::move(exact),
                       "random_" + shape.to_string() + "_s" + std::to_string(seed));
}

}  // namespace sylten
