#include "pdelearn/simd/kernels.hpp"

#include "kernels_impl.hpp"

namespace pdelearn::simd {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

double sum_scalar(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i];
  return acc;
}

double sum_squares_scalar(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * x[i];
  return acc;
}

void gemm_scalar(const double* a, std::size_t lda, const double* b, std::size_t ldb,
                 double* c, std::size_t ldc, std::size_t rows, std::size_t inner,
                 std::size_t cols, bool accumulate) {
  for (std::size_t r = 0; r < rows; ++r) {
    double* crow = c + r * ldc;
    if (!accumulate) {
      for (std::size_t j = 0; j < cols; ++j) crow[j] = 0.0;
    }
    for (std::size_t k = 0; k < inner; ++k) {
      const double w = a[r * lda + k];
      const double* brow = b + k * ldb;
      for (std::size_t j = 0; j < cols; ++j) crow[j] += w * brow[j];
    }
  }
}

void relu3_jet_scalar(const double* z, double* s0, double* s1, double* s2, double* s3,
                      std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double t = z[i] > 0.0 ? z[i] : 0.0;
    const double t2 = t * t;
    s0[i] = t2 * t;
    s1[i] = 3.0 * t2;
    s2[i] = 6.0 * t;
    s3[i] = z[i] > 0.0 ? 6.0 : 0.0;
  }
}

void jet_forward_scalar(const double* s1, const double* s2, const double* zt,
                        const double* zs, double* at, double* as, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    at[i] = s1[i] * zt[i];
    if (as != nullptr) as[i] = s2[i] * zt[i] * zt[i] + s1[i] * zs[i];
  }
}

void jet_backward_scalar(const double* s1, const double* s2, const double* s3,
                         const double* zt, const double* zs, const double* gt,
                         const double* gs, double* gz, double* gzt, double* gzs,
                         std::size_t n) {
  if (gs == nullptr) {
    for (std::size_t i = 0; i < n; ++i) {
      gz[i] += gt[i] * s2[i] * zt[i];
      gzt[i] = gt[i] * s1[i];
    }
    return;
  }
  for (std::size_t i = 0; i < n; ++i) {
    gz[i] += gt[i] * s2[i] * zt[i] + gs[i] * (s3[i] * zt[i] * zt[i] + s2[i] * zs[i]);
    gzt[i] = gt[i] * s1[i] + 2.0 * gs[i] * s2[i] * zt[i];
    gzs[i] = gs[i] * s1[i];
  }
}

void mul_scalar(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

constexpr KernelTable kScalarTable{
    Isa::kScalar,      dot_scalar,          axpy_scalar,         sum_scalar,
    sum_squares_scalar, gemm_scalar,        relu3_jet_scalar,    jet_forward_scalar,
    jet_backward_scalar, mul_scalar,
};

}  // namespace

const KernelTable& scalar_kernels() { return kScalarTable; }

}  // namespace pdelearn::simd
