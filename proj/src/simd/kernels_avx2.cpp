// Compiled with -mavx2 -mfma on x86-64; only reached after a runtime CPUID check.
#include "kernels_impl.hpp"

#if defined(__AVX2__) && defined(__FMA__)
#include <immintrin.h>

namespace pdelearn::simd::detail {
namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  __m256d acc2 = _mm256_setzero_pd();
  __m256d acc3 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
    acc2 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 8), _mm256_loadu_pd(b + i + 8), acc2);
    acc3 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 12), _mm256_loadu_pd(b + i + 12), acc3);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  }
  double acc = hsum(_mm256_add_pd(_mm256_add_pd(acc0, acc1), _mm256_add_pd(acc2, acc3)));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

double sum_avx2(const double* x, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(x + i));
    acc1 = _mm256_add_pd(acc1, _mm256_loadu_pd(x + i + 4));
  }
  for (; i + 4 <= n; i += 4) acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(x + i));
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += x[i];
  return acc;
}

double sum_squares_avx2(const double* x, std::size_t n) { return dot_avx2(x, x, n); }

// 4x8 register block: eight accumulators, B rows streamed, A broadcast.
void gemm_avx2(const double* a, std::size_t lda, const double* b, std::size_t ldb, double* c,
               std::size_t ldc, std::size_t rows, std::size_t inner, std::size_t cols,
               bool accumulate) {
  std::size_t r = 0;
  for (; r + 4 <= rows; r += 4) {
    const double* a0 = a + r * lda;
    const double* a1 = a0 + lda;
    const double* a2 = a1 + lda;
    const double* a3 = a2 + lda;
    double* c0 = c + r * ldc;
    double* c1 = c0 + ldc;
    double* c2 = c1 + ldc;
    double* c3 = c2 + ldc;
    std::size_t j = 0;
    for (; j + 8 <= cols; j += 8) {
      __m256d x00 = _mm256_setzero_pd(), x01 = _mm256_setzero_pd();
      __m256d x10 = _mm256_setzero_pd(), x11 = _mm256_setzero_pd();
      __m256d x20 = _mm256_setzero_pd(), x21 = _mm256_setzero_pd();
      __m256d x30 = _mm256_setzero_pd(), x31 = _mm256_setzero_pd();
      for (std::size_t k = 0; k < inner; ++k) {
        const double* brow = b + k * ldb + j;
        const __m256d b0 = _mm256_loadu_pd(brow);
        const __m256d b1 = _mm256_loadu_pd(brow + 4);
        __m256d w = _mm256_broadcast_sd(a0 + k);
        x00 = _mm256_fmadd_pd(w, b0, x00);
        x01 = _mm256_fmadd_pd(w, b1, x01);
        w = _mm256_broadcast_sd(a1 + k);
        x10 = _mm256_fmadd_pd(w, b0, x10);
        x11 = _mm256_fmadd_pd(w, b1, x11);
        w = _mm256_broadcast_sd(a2 + k);
        x20 = _mm256_fmadd_pd(w, b0, x20);
        x21 = _mm256_fmadd_pd(w, b1, x21);
        w = _mm256_broadcast_sd(a3 + k);
        x30 = _mm256_fmadd_pd(w, b0, x30);
        x31 = _mm256_fmadd_pd(w, b1, x31);
      }
      if (accumulate) {
        x00 = _mm256_add_pd(x00, _mm256_loadu_pd(c0 + j));
        x01 = _mm256_add_pd(x01, _mm256_loadu_pd(c0 + j + 4));
        x10 = _mm256_add_pd(x10, _mm256_loadu_pd(c1 + j));
        x11 = _mm256_add_pd(x11, _mm256_loadu_pd(c1 + j + 4));
        x20 = _mm256_add_pd(x20, _mm256_loadu_pd(c2 + j));
        x21 = _mm256_add_pd(x21, _mm256_loadu_pd(c2 + j + 4));
        x30 = _mm256_add_pd(x30, _mm256_loadu_pd(c3 + j));
        x31 = _mm256_add_pd(x31, _mm256_loadu_pd(c3 + j + 4));
      }
      _mm256_storeu_pd(c0 + j, x00);
      _mm256_storeu_pd(c0 + j + 4, x01);
      _mm256_storeu_pd(c1 + j, x10);
      _mm256_storeu_pd(c1 + j + 4, x11);
      _mm256_storeu_pd(c2 + j, x20);
      _mm256_storeu_pd(c2 + j + 4, x21);
      _mm256_storeu_pd(c3 + j, x30);
      _mm256_storeu_pd(c3 + j + 4, x31);
    }
    for (; j < cols; ++j) {
      double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
      for (std::size_t k = 0; k < inner; ++k) {
        const double bv = b[k * ldb + j];
        s0 += a0[k] * bv;
        s1 += a1[k] * bv;
        s2 += a2[k] * bv;
        s3 += a3[k] * bv;
      }
      if (accumulate) {
        c0[j] += s0;
        c1[j] += s1;
        c2[j] += s2;
        c3[j] += s3;
      } else {
        c0[j] = s0;
        c1[j] = s1;
        c2[j] = s2;
        c3[j] = s3;
      }
    }
  }
  for (; r < rows; ++r) {
    double* crow = c + r * ldc;
    if (!accumulate) {
      for (std::size_t j = 0; j < cols; ++j) crow[j] = 0.0;
    }
    for (std::size_t k = 0; k < inner; ++k) axpy_avx2(a[r * lda + k], b + k * ldb, crow, cols);
  }
}

void relu3_jet_avx2(const double* z, double* s0, double* s1, double* s2, double* s3,
                    std::size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  const __m256d three = _mm256_set1_pd(3.0);
  const __m256d six = _mm256_set1_pd(6.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d zv = _mm256_loadu_pd(z + i);
    const __m256d t = _mm256_max_pd(zv, zero);
    const __m256d t2 = _mm256_mul_pd(t, t);
    _mm256_storeu_pd(s0 + i, _mm256_mul_pd(t2, t));
    _mm256_storeu_pd(s1 + i, _mm256_mul_pd(three, t2));
    _mm256_storeu_pd(s2 + i, _mm256_mul_pd(six, t));
    _mm256_storeu_pd(s3 + i, _mm256_and_pd(_mm256_cmp_pd(zv, zero, _CMP_GT_OQ), six));
  }
  for (; i < n; ++i) {
    const double t = z[i] > 0.0 ? z[i] : 0.0;
    s0[i] = t * t * t;
    s1[i] = 3.0 * t * t;
    s2[i] = 6.0 * t;
    s3[i] = z[i] > 0.0 ? 6.0 : 0.0;
  }
}

void jet_forward_avx2(const double* s1, const double* s2, const double* zt, const double* zs,
                      double* at, double* as, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d a1 = _mm256_loadu_pd(s1 + i);
    const __m256d t = _mm256_loadu_pd(zt + i);
    _mm256_storeu_pd(at + i, _mm256_mul_pd(a1, t));
    if (as != nullptr) {
      const __m256d a2 = _mm256_loadu_pd(s2 + i);
      const __m256d sec = _mm256_mul_pd(a1, _mm256_loadu_pd(zs + i));
      _mm256_storeu_pd(as + i, _mm256_fmadd_pd(_mm256_mul_pd(a2, t), t, sec));
    }
  }
  for (; i < n; ++i) {
    at[i] = s1[i] * zt[i];
    if (as != nullptr) as[i] = s2[i] * zt[i] * zt[i] + s1[i] * zs[i];
  }
}

void jet_backward_avx2(const double* s1, const double* s2, const double* s3, const double* zt,
                       const double* zs, const double* gt, const double* gs, double* gz,
                       double* gzt, double* gzs, std::size_t n) {
  std::size_t i = 0;
  if (gs == nullptr) {
    for (; i + 4 <= n; i += 4) {
      const __m256d g = _mm256_loadu_pd(gt + i);
      const __m256d t = _mm256_loadu_pd(zt + i);
      const __m256d a2 = _mm256_loadu_pd(s2 + i);
      _mm256_storeu_pd(gz + i, _mm256_fmadd_pd(_mm256_mul_pd(g, a2), t, _mm256_loadu_pd(gz + i)));
      _mm256_storeu_pd(gzt + i, _mm256_mul_pd(g, _mm256_loadu_pd(s1 + i)));
    }
    for (; i < n; ++i) {
      gz[i] += gt[i] * s2[i] * zt[i];
      gzt[i] = gt[i] * s1[i];
    }
    return;
  }
  const __m256d two = _mm256_set1_pd(2.0);
  for (; i + 4 <= n; i += 4) {
    const __m256d g1 = _mm256_loadu_pd(gt + i);
    const __m256d g2 = _mm256_loadu_pd(gs + i);
    const __m256d t = _mm256_loadu_pd(zt + i);
    const __m256d sec = _mm256_loadu_pd(zs + i);
    const __m256d a1 = _mm256_loadu_pd(s1 + i);
    const __m256d a2 = _mm256_loadu_pd(s2 + i);
    const __m256d a3 = _mm256_loadu_pd(s3 + i);
    const __m256d inner = _mm256_fmadd_pd(_mm256_mul_pd(a3, t), t, _mm256_mul_pd(a2, sec));
    __m256d acc = _mm256_fmadd_pd(_mm256_mul_pd(g1, a2), t, _mm256_loadu_pd(gz + i));
    acc = _mm256_fmadd_pd(g2, inner, acc);
    _mm256_storeu_pd(gz + i, acc);
    const __m256d cross = _mm256_mul_pd(_mm256_mul_pd(two, g2), _mm256_mul_pd(a2, t));
    _mm256_storeu_pd(gzt + i, _mm256_fmadd_pd(g1, a1, cross));
    _mm256_storeu_pd(gzs + i, _mm256_mul_pd(g2, a1));
  }
  for (; i < n; ++i) {
    gz[i] += gt[i] * s2[i] * zt[i] + gs[i] * (s3[i] * zt[i] * zt[i] + s2[i] * zs[i]);
    gzt[i] = gt[i] * s1[i] + 2.0 * gs[i] * s2[i] * zt[i];
    gzs[i] = gs[i] * s1[i];
  }
}

void mul_avx2(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  }
  for (; i < n; ++i) out[i] = a[i] * b[i];
}

constexpr KernelTable kAvx2Table{
    Isa::kAvx2,      dot_avx2,       axpy_avx2,        sum_avx2,
    sum_squares_avx2, gemm_avx2,     relu3_jet_avx2,   jet_forward_avx2,
    jet_backward_avx2, mul_avx2,
};

}  // namespace

const KernelTable* avx2_table() { return &kAvx2Table; }

}  // namespace pdelearn::simd::detail

#else

namespace pdelearn::simd::detail {
const KernelTable* avx2_table() { return nullptr; }
}  // namespace pdelearn::simd::detail

#endif
