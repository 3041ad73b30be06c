#pragma once

// Data-parallel inner loops used by Gram assembly, dense layers and
// Monte-Carlo reductions. Every kernel has a scalar reference and optional
// AVX2 / NEON variants; the active table is chosen once at startup from the
// CPU feature set and can be pinned with PDELEARN_ISA=scalar|avx2|neon.

#include <cstddef>
#include <span>
#include <string_view>

namespace pdelearn::simd {

enum class Isa { kScalar, kAvx2, kNeon };

std::string_view isa_name(Isa isa);

struct KernelTable {
  Isa isa;

  double (*dot)(const double* a, const double* b, std::size_t n);
  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  double (*sum)(const double* x, std::size_t n);
  double (*sum_squares)(const double* x, std::size_t n);
  // C (rows x cols) = A (rows x inner) * B (inner x cols), all row-major with
  // explicit leading dimensions. When accumulate is set C += A * B.
  void (*gemm)(const double* a, std::size_t lda, const double* b, std::size_t ldb,
               double* c, std::size_t ldc, std::size_t rows, std::size_t inner,
               std::size_t cols, bool accumulate);
  // s0 = relu(z)^3, s1 = 3 relu(z)^2, s2 = 6 relu(z), s3 = 6 [z > 0]
  void (*relu3_jet)(const double* z, double* s0, double* s1, double* s2, double* s3,
                    std::size_t n);
  // Chain rule for one first/second directional derivative channel:
  //   at = s1 * zt;  as = s2 * zt^2 + s1 * zs
  void (*jet_forward)(const double* s1, const double* s2, const double* zt,
                      const double* zs, double* at, double* as, std::size_t n);
  // Adjoint of jet_forward. Given adjoints gt, gs of (at, as):
  //   gz  += gt * s2 * zt + gs * (s3 * zt^2 + s2 * zs)
  //   gzt  = gt * s1 + 2 * gs * s2 * zt
  //   gzs  = gs * s1
  // gs may be null (first-derivative-only propagation).
  void (*jet_backward)(const double* s1, const double* s2, const double* s3,
                       const double* zt, const double* zs, const double* gt,
                       const double* gs, double* gz, double* gzt, double* gzs,
                       std::size_t n);
  // out = a * b elementwise
  void (*mul)(const double* a, const double* b, double* out, std::size_t n);
};

const KernelTable& scalar_kernels();
// nullptr when the variant was not compiled in or the CPU lacks the feature.
const KernelTable* avx2_kernels();
const KernelTable* neon_kernels();

bool isa_available(Isa isa);

// Process-wide active table. Thread-safe to read; force_isa is meant for
// tests and benchmarks and must not race with kernel calls.
const KernelTable& active();
void force_isa(Isa isa);
void reset_isa();

inline double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot(a.data(), b.data(), a.size());
}

inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  active().axpy(alpha, x.data(), y.data(), x.size());
}

inline double sum(std::span<const double> x) { return active().sum(x.data(), x.size()); }

inline double sum_squares(std::span<const double> x) {
  return active().sum_squares(x.data(), x.size());
}

}  // namespace pdelearn::simd
