#include "sylten/kernels.hpp"

#include <cstdlib>
#include <cstring>
#include <mutex>
#include <stdexcept>
#include <string>

#if defined(__x86_64__) || defined(_M_X64)
#define SYLTEN_X86_64 1
#else
#define SYLTEN_X86_64 0
#endif

#if defined(__aarch64__) || defined(_M_ARM64)
#define SYLTEN_AARCH64 1
#else
#define SYLTEN_AARCH64 0
#endif

namespace sylten::kernels {

#if SYLTEN_X86_64
namespace avx2 {
double dot(const double*, const double*, std::size_t);
void axpy(double, const double*, double*, std::size_t);
void axpby(double, const double*, double, const double*, double*, std::size_t);
void scale(double, const double*, double*, std::size_t);
}  // namespace avx2
#endif

#if SYLTEN_AARCH64
namespace neon {
double dot(const double*, const double*, std::size_t);
void axpy(double, const double*, double*, std::size_t);
void axpby(double, const double*, double, const double*, double*, std::size_t);
void scale(double, const double*, double*, std::size_t);
}  // namespace neon
#endif

namespace {

struct DispatchTable {
  Isa isa;
  double (*dot)(const double*, const double*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
  void (*axpby)(double, const double*, double, const double*, double*,
                std::size_t);
  void (*scale)(double, const double*, double*, std::size_t);
};

constexpr DispatchTable kScalarTable = {Isa::Scalar, scalar::dot, scalar::axpy,
                                        scalar::axpby, scalar::scale};

bool isa_supported(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return true;
    case Isa::Avx2:
#if SYLTEN_X86_64
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Isa::Neon:
      return SYLTEN_AARCH64 != 0;
  }
  return false;
}

DispatchTable table_for(Isa isa) {
  switch (isa) {
#if SYLTEN_X86_64
    case Isa::Avx2:
      return {Isa::Avx2, avx2::dot, avx2::axpy, avx2::axpby, avx2::scale};
#endif
#if SYLTEN_AARCH64
    case Isa::Neon:
      return {Isa::Neon, neon::dot, neon::axpy, neon::axpby, neon::scale};
#endif
    default:
      return kScalarTable;
  }
}

DispatchTable g_table = kScalarTable;
std::once_flag g_init_flag;

Isa pick_startup_isa() {
  if (const char* env = std::getenv("SYLTEN_ISA")) {
    if (std::strcmp(env, "scalar") == 0) return Isa::Scalar;
    if (std::strcmp(env, "avx2") == 0 && isa_supported(Isa::Avx2)) return Isa::Avx2;
    if (std::strcmp(env, "neon") == 0 && isa_supported(Isa::Neon)) return Isa::Neon;
    // Unknown or unsupported value: fall through to autodetection.
  }
  if (isa_supported(Isa::Avx2)) return Isa::Avx2;
  if (isa_supported(Isa::Neon)) return Isa::Neon;
  return Isa::Scalar;
}

const DispatchTable& table() {
  std::call_once(g_init_flag, [] { g_table = table_for(pick_startup_isa()); });
  return g_table;
}

}  // namespace

const char* isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return "scalar";
    case Isa::Avx2:
      return "avx2";
    case Isa::Neon:
      return "neon";
  }
  return "unknown";
}

Isa active_isa() { return table().isa; }

Isa best_supported_isa() {
  if (isa_supported(Isa::Avx2)) return Isa::Avx2;
  if (isa_supported(Isa::Neon)) return Isa::Neon;
  return Isa::Scalar;
}

void force_isa(Isa isa) {
  if (!isa_supported(isa)) {
    throw std::invalid_argument(std::string("kernels: ISA not supported on this CPU: ") +
                                isa_name(isa));
  }
  table();  // make sure startup init has run, then overwrite
  g_table = table_for(isa);
}

double dot(const double* x, const double* y, std::size_t n) {
  return table().dot(x, y, n);
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  table().axpy(a, x, y, n);
}

void axpby(double a, const double* x, double b, const double* y, double* out,
           std::size_t n) {
  table().axpby(a, x, b, y, out, n);
}

void scale(double a, const double* x, double* out, std::size_t n) {
  table().scale(a, x, out, n);
}

}  // namespace sylten::kernels
