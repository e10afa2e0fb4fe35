#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "sylten/kernels.hpp"

using namespace sylten;

namespace {

// Local generator so kernel inputs do not depend on library code.
struct Rng {
  std::uint64_t state;
  double next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return 2.0 * (static_cast<double>(z >> 11) * 0x1.0p-53) - 1.0;
  }
};

std::vector<double> random_vec(std::size_t n, std::uint64_t seed) {
  Rng rng{seed};
  std::vector<double> v(n);
  for (double& x : v) x = rng.next();
  return v;
}

}  // namespace

TEST_CASE("scalar reference kernels match plain loops") {
  const auto x = random_vec(97, 11);
  const auto y = random_vec(97, 22);

  double expected = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) expected += x[i] * y[i];
  CHECK(kernels::scalar::dot(x.data(), y.data(), x.size()) ==
        doctest::Approx(expected).epsilon(1e-14));

  std::vector<double> out(x.size());
  kernels::scalar::axpby(2.5, x.data(), -0.5, y.data(), out.data(), x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    CHECK(out[i] == doctest::Approx(2.5 * x[i] - 0.5 * y[i]).epsilon(1e-15));
  }
}

TEST_CASE("SIMD variants are equivalent to the scalar reference") {
  const kernels::Isa best = kernels::best_supported_isa();
  if (best == kernels::Isa::Scalar) {
    MESSAGE("no SIMD ISA on this CPU, dispatch test degenerate");
  }

  // Sizes straddle every vector width and remainder case.
  for (std::size_t n : {0, 1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 17, 31, 64, 67, 255, 1024}) {
    const auto x = random_vec(n, 100 + n);
    const auto y = random_vec(n, 200 + n);
    const double tol = 1e-12 * (1.0 + static_cast<double>(n));

    const double dref = kernels::scalar::dot(x.data(), y.data(), n);

    kernels::force_isa(best);
    CHECK(kernels::active_isa() == best);
    const double dsimd = kernels::dot(x.data(), y.data(), n);
    CHECK(std::abs(dsimd - dref) <= tol * (1.0 + std::abs(dref)));

    std::vector<double> ys = y, yr = y;
    kernels::axpy(0.7, x.data(), ys.data(), n);
    kernels::scalar::axpy(0.7, x.data(), yr.data(), n);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(std::abs(ys[i] - yr[i]) <= 1e-14 * (1.0 + std::abs(yr[i])));
    }

    std::vector<double> os(n), orf(n);
    kernels::axpby(-1.3, x.data(), 0.25, y.data(), os.data(), n);
    kernels::scalar::axpby(-1.3, x.data(), 0.25, y.data(), orf.data(), n);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(std::abs(os[i] - orf[i]) <= 1e-14 * (1.0 + std::abs(orf[i])));
    }

    kernels::scale(3.25, x.data(), os.data(), n);
    kernels::scalar::scale(3.25, x.data(), orf.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(os[i] == orf[i]);

    kernels::force_isa(kernels::Isa::Scalar);
    CHECK(kernels::dot(x.data(), y.data(), n) == dref);
    kernels::force_isa(best);
  }
}

TEST_CASE("force_isa rejects unsupported ISAs") {
#if !defined(__aarch64__)
  CHECK_THROWS_AS(kernels::force_isa(kernels::Isa::Neon), std::invalid_argument);
#else
  CHECK_THROWS_AS(kernels::force_isa(kernels::Isa::Avx2), std::invalid_argument);
#endif
  kernels::force_isa(kernels::best_supported_isa());
}
