#pragma once

#include <cstddef>

// Data-parallel inner loops shared by every tensor operation. Each kernel
// has a scalar reference implementation and SIMD variants (AVX2 on x86-64,
// NEON on aarch64); the active variant is picked once at startup from CPU
// capabilities, or forced via force_isa() / the SYLTEN_ISA environment
// variable (values: scalar, avx2, neon).

namespace sylten::kernels {

enum class Isa { Scalar, Avx2, Neon };

const char* isa_name(Isa isa);

/// Instruction set the dispatch table currently points at.
Isa active_isa();

/// Highest ISA this CPU supports.
Isa best_supported_isa();

/// Repoint the dispatch table. Throws std::invalid_argument if the CPU
/// does not support the requested ISA. Intended for equivalence tests
/// and benchmarking, not concurrent use.
void force_isa(Isa isa);

/// sum_i x[i]*y[i]
double dot(const double* x, const double* y, std::size_t n);

/// y += a*x
void axpy(double a, const double* x, double* y, std::size_t n);

/// out = a*x + b*y  (out may alias x or y)
void axpby(double a, const double* x, double b, const double* y, double* out,
           std::size_t n);

/// out = a*x  (out may alias x)
void scale(double a, const double* x, double* out, std::size_t n);

// Reference implementations, always available regardless of dispatch.
namespace scalar {
double dot(const double* x, const double* y, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
void axpby(double a, const double* x, double b, const double* y, double* out,
           std::size_t n);
void scale(double a, const double* x, double* out, std::size_t n);
}  // namespace scalar

}  // namespace sylten::kernels
