#pragma once

// Deterministic random inputs for tests, independent of library RNG.

#include <cstdint>

#include "sylten/tensor.hpp"

namespace test_rng {

struct SplitMix64 {
  std::uint64_t state;

  std::uint64_t next_u64() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  double next() {  // uniform in [-1, 1)
    return 2.0 * (static_cast<double>(next_u64() >> 11) * 0x1.0p-53) - 1.0;
  }
};

inline sylten::DenseTensor random_tensor(const sylten::Shape& shape,
                                         std::uint64_t seed) {
  SplitMix64 rng{seed * 0x9e3779b97f4a7c15ULL + 1};
  sylten::DenseTensor t(shape);
  for (double& v : t.data()) v = rng.next();
  return t;
}

inline sylten::DenseMatrix random_matrix(std::int64_t rows, std::int64_t cols,
                                         std::uint64_t seed) {
  SplitMix64 rng{seed * 0x9e3779b97f4a7c15ULL + 2};
  sylten::DenseMatrix m(rows, cols);
  for (double& v : m.data()) v = rng.next();
  return m;
}

/// Square matrix with strictly dominant diagonal (well conditioned).
inline sylten::DenseMatrix random_dominant_matrix(std::int64_t n,
                                                  std::uint64_t seed) {
  sylten::DenseMatrix m = random_matrix(n, n, seed);
  for (std::int64_t i = 0; i < n; ++i) {
    double off = 0.0;
    for (std::int64_t j = 0; j < n; ++j) {
      if (j != i) off += m(i, j) > 0 ? m(i, j) : -m(i, j);
    }
    m(i, i) = off + 1.0;
  }
  return m;
}

}  // namespace test_rng
