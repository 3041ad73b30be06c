// AArch64 Advanced SIMD variants. Two-lane double vectors; NEON is mandatory
// on AArch64 so no runtime probe is needed beyond the compile-time guard.
#include "kernels_impl.hpp"

#if defined(__aarch64__) && defined(__ARM_NEON)
#include <arm_neon.h>

namespace pdelearn::simd::detail {
namespace {

double dot_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  float64x2_t acc2 = vdupq_n_f64(0.0);
  float64x2_t acc3 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
    acc2 = vfmaq_f64(acc2, vld1q_f64(a + i + 4), vld1q_f64(b + i + 4));
    acc3 = vfmaq_f64(acc3, vld1q_f64(a + i + 6), vld1q_f64(b + i + 6));
  }
  for (; i + 2 <= n; i += 2) acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
  double acc = vaddvq_f64(vaddq_f64(vaddq_f64(acc0, acc1), vaddq_f64(acc2, acc3)));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void axpy_neon(double alpha, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
  for (; i < n; ++i) y[i] += alpha * x[i];
}

double sum_neon(const double* x, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vaddq_f64(acc0, vld1q_f64(x + i));
    acc1 = vaddq_f64(acc1, vld1q_f64(x + i + 2));
  }
  for (; i + 2 <= n; i += 2) acc0 = vaddq_f64(acc0, vld1q_f64(x + i));
  double acc = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) acc += x[i];
  return acc;
}

double sum_squares_neon(const double* x, std::size_t n) { return dot_neon(x, x, n); }

// 4x4 register block.
void gemm_neon(const double* a, std::size_t lda, const double* b, std::size_t ldb, double* c,
               std::size_t ldc, std::size_t rows, std::size_t inner, std::size_t cols,
               bool accumulate) {
  std::size_t r = 0;
  for (; r + 4 <= rows; r += 4) {
    std::size_t j = 0;
    for (; j + 4 <= cols; j += 4) {
      float64x2_t acc[4][2];
      for (auto& row : acc) row[0] = row[1] = vdupq_n_f64(0.0);
      for (std::size_t k = 0; k < inner; ++k) {
        const double* brow = b + k * ldb + j;
        const float64x2_t b0 = vld1q_f64(brow);
        const float64x2_t b1 = vld1q_f64(brow + 2);
        for (std::size_t q = 0; q < 4; ++q) {
          const float64x2_t w = vdupq_n_f64(a[(r + q) * lda + k]);
          acc[q][0] = vfmaq_f64(acc[q][0], w, b0);
          acc[q][1] = vfmaq_f64(acc[q][1], w, b1);
        }
      }
      for (std::size_t q = 0; q < 4; ++q) {
        double* crow = c + (r + q) * ldc + j;
        if (accumulate) {
          acc[q][0] = vaddq_f64(acc[q][0], vld1q_f64(crow));
          acc[q][1] = vaddq_f64(acc[q][1], vld1q_f64(crow + 2));
        }
        vst1q_f64(crow, acc[q][0]);
        vst1q_f64(crow + 2, acc[q][1]);
      }
    }
    for (; j < cols; ++j) {
      for (std::size_t q = 0; q < 4; ++q) {
        double s = 0.0;
        for (std::size_t k = 0; k < inner; ++k) s += a[(r + q) * lda + k] * b[k * ldb + j];
        double* cv = c + (r + q) * ldc + j;
        *cv = accumulate ? *cv + s : s;
      }
    }
  }
  for (; r < rows; ++r) {
    double* crow = c + r * ldc;
    if (!accumulate) {
      for (std::size_t j = 0; j < cols; ++j) crow[j] = 0.0;
    }
    for (std::size_t k = 0; k < inner; ++k) axpy_neon(a[r * lda + k], b + k * ldb, crow, cols);
  }
}

void relu3_jet_neon(const double* z, double* s0, double* s1, double* s2, double* s3,
                    std::size_t n) {
  const float64x2_t zero = vdupq_n_f64(0.0);
  const float64x2_t three = vdupq_n_f64(3.0);
  const float64x2_t six = vdupq_n_f64(6.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t zv = vld1q_f64(z + i);
    const float64x2_t t = vmaxq_f64(zv, zero);
    const float64x2_t t2 = vmulq_f64(t, t);
    vst1q_f64(s0 + i, vmulq_f64(t2, t));
    vst1q_f64(s1 + i, vmulq_f64(three, t2));
    vst1q_f64(s2 + i, vmulq_f64(six, t));
    vst1q_f64(s3 + i, vbslq_f64(vcgtq_f64(zv, zero), six, zero));
  }
  for (; i < n; ++i) {
    const double t = z[i] > 0.0 ? z[i] : 0.0;
    s0[i] = t * t * t;
    s1[i] = 3.0 * t * t;
    s2[i] = 6.0 * t;
    s3[i] = z[i] > 0.0 ? 6.0 : 0.0;
  }
}

void jet_forward_neon(const double* s1, const double* s2, const double* zt, const double* zs,
                      double* at, double* as, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t a1 = vld1q_f64(s1 + i);
    const float64x2_t t = vld1q_f64(zt + i);
    vst1q_f64(at + i, vmulq_f64(a1, t));
    if (as != nullptr) {
      const float64x2_t sec = vmulq_f64(a1, vld1q_f64(zs + i));
      vst1q_f64(as + i, vfmaq_f64(sec, vmulq_f64(vld1q_f64(s2 + i), t), t));
    }
  }
  for (; i < n; ++i) {
    at[i] = s1[i] * zt[i];
    if (as != nullptr) as[i] = s2[i] * zt[i] * zt[i] + s1[i] * zs[i];
  }
}

void jet_backward_neon(const double* s1, const double* s2, const double* s3, const double* zt,
                       const double* zs, const double* gt, const double* gs, double* gz,
                       double* gzt, double* gzs, std::size_t n) {
  std::size_t i = 0;
  if (gs == nullptr) {
    for (; i + 2 <= n; i += 2) {
      const float64x2_t g = vld1q_f64(gt + i);
      const float64x2_t t = vld1q_f64(zt + i);
      vst1q_f64(gz + i, vfmaq_f64(vld1q_f64(gz + i), vmulq_f64(g, vld1q_f64(s2 + i)), t));
      vst1q_f64(gzt + i, vmulq_f64(g, vld1q_f64(s1 + i)));
    }
    for (; i < n; ++i) {
      gz[i] += gt[i] * s2[i] * zt[i];
      gzt[i] = gt[i] * s1[i];
    }
    return;
  }
  const float64x2_t two = vdupq_n_f64(2.0);
  for (; i + 2 <= n; i += 2) {
    const float64x2_t g1 = vld1q_f64(gt + i);
    const float64x2_t g2 = vld1q_f64(gs + i);
    const float64x2_t t = vld1q_f64(zt + i);
    const float64x2_t sec = vld1q_f64(zs + i);
    const float64x2_t a1 = vld1q_f64(s1 + i);
    const float64x2_t a2 = vld1q_f64(s2 + i);
    const float64x2_t a3 = vld1q_f64(s3 + i);
    const float64x2_t inner = vfmaq_f64(vmulq_f64(a2, sec), vmulq_f64(a3, t), t);
    float64x2_t acc = vfmaq_f64(vld1q_f64(gz + i), vmulq_f64(g1, a2), t);
    acc = vfmaq_f64(acc, g2, inner);
    vst1q_f64(gz + i, acc);
    const float64x2_t cross = vmulq_f64(vmulq_f64(two, g2), vmulq_f64(a2, t));
    vst1q_f64(gzt + i, vfmaq_f64(cross, g1, a1));
    vst1q_f64(gzs + i, vmulq_f64(g2, a1));
  }
  for (; i < n; ++i) {
    gz[i] += gt[i] * s2[i] * zt[i] + gs[i] * (s3[i] * zt[i] * zt[i] + s2[i] * zs[i]);
    gzt[i] = gt[i] * s1[i] + 2.0 * gs[i] * s2[i] * zt[i];
    gzs[i] = gs[i] * s1[i];
  }
}

void mul_neon(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(out + i, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
  for (; i < n; ++i) out[i] = a[i] * b[i];
}

constexpr KernelTable kNeonTable{
    Isa::kNeon,      dot_neon,       axpy_neon,        sum_neon,
    sum_squares_neon, gemm_neon,     relu3_jet_neon,   jet_forward_neon,
    jet_backward_neon, mul_neon,
};

}  // namespace

const KernelTable* neon_table() { return &kNeonTable; }

}  // namespace pdelearn::simd::detail

#else

namespace pdelearn::simd::detail {
const KernelTable* neon_table() { return nullptr; }
}  // namespace pdelearn::simd::detail

#endif
