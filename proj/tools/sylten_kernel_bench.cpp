// Micro-benchmark for the dispatch kernels: throughput of each ISA variant
// on cache-resident and memory-bound vector lengths.

#include <chrono>
#include <cstdio>
#include <vector>

#include "sylten/kernels.hpp"

using namespace sylten;

namespace {

volatile double g_sink = 0.0;

double time_ms(int reps, const auto& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  for (int r = 0; r < reps; ++r) fn();
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                   t0)
      .count();
}

void bench_isa(kernels::Isa isa, std::size_t n, int reps) {
  kernels::force_isa(isa);
  std::vector<double> x(n, 1.5), y(n, -0.25), out(n);

  const double dot_ms = time_ms(reps, [&] { g_sink = kernels::dot(x.data(), y.data(), n); });
  const double axpy_ms = time_ms(reps, [&] { kernels::axpy(1.0000001, x.data(), y.data(), n); });
  const double axpby_ms =
      time_ms(reps, [&] { kernels::axpby(0.5, x.data(), 0.5, y.data(), out.data(), n); });

  const double gb = static_cast<double>(n) * sizeof(double) * reps / 1e9;
  std::printf("  %-6s n=%8zu  dot %7.2f GB/s  axpy %7.2f GB/s  axpby %7.2f GB/s\n",
              kernels::isa_name(isa), n, 2 * gb / (dot_ms / 1e3),
              3 * gb / (axpy_ms / 1e3), 3 * gb / (axpby_ms / 1e3));
}

}  // namespace

int main() {
  const kernels::Isa best = kernels::best_supported_isa();
  std::printf("best supported ISA: %s\n", kernels::isa_name(best));

  for (std::size_t n : {std::size_t{1} << 10, std::size_t{1} << 14, std::size_t{1} << 20}) {
    const int reps = static_cast<int>((std::size_t{1} << 26) / n);
    std::printf("length %zu, %d reps\n", n, reps);
    bench_isa(kernels::Isa::Scalar, n, reps);
    if (best != kernels::Isa::Scalar) bench_isa(best, n, reps);
  }
  kernels::force_isa(best);
  return 0;
}
