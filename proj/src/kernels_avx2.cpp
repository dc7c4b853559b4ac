#include "setnovo/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#define SETNOVO_HAVE_AVX2_BUILD 1
#include <immintrin.h>
#endif

#include <algorithm>
#include <cmath>

// Bit-equality with the scalar kernels requires that every output element see
// the same sequence of rounding steps. Vectorization here only runs
// independent elements side by side (and uses separate mul/add, never FMA),
// so each lane's chain is unchanged.

namespace setnovo::kernels {

#ifdef SETNOVO_HAVE_AVX2_BUILD

namespace {

void matmul_avx2(const double* a, const double* b, double* c, std::size_t m,
                 std::size_t k, std::size_t n) {
  std::fill(c, c + m * n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    double* crow = c + i * n;
    for (std::size_t p = 0; p < k; ++p) {
      double av = a[i * k + p];
      const double* brow = b + p * n;
      __m256d va = _mm256_set1_pd(av);
      std::size_t j = 0;
      for (; j + 4 <= n; j += 4) {
        __m256d vb = _mm256_loadu_pd(brow + j);
        __m256d vc = _mm256_loadu_pd(crow + j);
        vc = _mm256_add_pd(vc, _mm256_mul_pd(va, vb));
        _mm256_storeu_pd(crow + j, vc);
      }
      for (; j < n; ++j) crow[j] += av * brow[j];
    }
  }
}

void matmul_tn_avx2(const double* a, const double* b, double* c, std::size_t m,
                    std::size_t k, std::size_t n) {
  std::fill(c, c + m * n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    double* crow = c + i * n;
    for (std::size_t p = 0; p < k; ++p) {
      double av = a[p * m + i];
      const double* brow = b + p * n;
      __m256d va = _mm256_set1_pd(av);
      std::size_t j = 0;
      for (; j + 4 <= n; j += 4) {
        __m256d vb = _mm256_loadu_pd(brow + j);
        __m256d vc = _mm256_loadu_pd(crow + j);
        vc = _mm256_add_pd(vc, _mm256_mul_pd(va, vb));
        _mm256_storeu_pd(crow + j, vc);
      }
      for (; j < n; ++j) crow[j] += av * brow[j];
    }
  }
}

// Four j-columns advance together; every column still accumulates over p in
// scalar order, so the per-element chains match matmul_nt_scalar.
void matmul_nt_avx2(const double* a, const double* b, double* c, std::size_t m,
                    std::size_t k, std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) {
    const double* arow = a + i * k;
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
      const double* b0 = b + (j + 0) * k;
      const double* b1 = b + (j + 1) * k;
      const double* b2 = b + (j + 2) * k;
      const double* b3 = b + (j + 3) * k;
      __m256d acc = _mm256_setzero_pd();
      for (std::size_t p = 0; p < k; ++p) {
        __m256d va = _mm256_set1_pd(arow[p]);
        __m256d vb = _mm256_set_pd(b3[p], b2[p], b1[p], b0[p]);
        acc = _mm256_add_pd(acc, _mm256_mul_pd(va, vb));
      }
      _mm256_storeu_pd(c + i * n + j, acc);
    }
    for (; j < n; ++j) {
      const double* brow = b + j * k;
      double acc = 0.0;
      for (std::size_t p = 0; p < k; ++p) acc += arow[p] * brow[p];
      c[i * n + j] = acc;
    }
  }
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
  __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vx = _mm256_loadu_pd(x + i);
    __m256d vy = _mm256_loadu_pd(y + i);
    vy = _mm256_add_pd(vy, _mm256_mul_pd(va, vx));
    _mm256_storeu_pd(y + i, vy);
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

// exp itself stays in libm; only the argument computation is vectorized. The
// arguments are bit-identical to the scalar path, so the exp results are too.
void exp_neg_abs_scale_avx2(const double* x, double* out, std::size_t n,
                            double scale) {
  const __m256d vscale = _mm256_set1_pd(scale);
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  alignas(32) double t[4];
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vx = _mm256_loadu_pd(x + i);
    __m256d vabs = _mm256_andnot_pd(sign_mask, vx);
    _mm256_store_pd(t, _mm256_mul_pd(vscale, vabs));
    for (int lane = 0; lane < 4; ++lane)
      out[i + lane] = t[lane] > kExpUnderflowCutoff ? 0.0 : std::exp(-t[lane]);
  }
  for (; i < n; ++i) {
    double ti = scale * std::fabs(x[i]);
    out[i] = ti > kExpUnderflowCutoff ? 0.0 : std::exp(-ti);
  }
}

void colwise_max_avx2(const double* a, double* out_max, std::size_t* out_argmax,
                      std::size_t m, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    out_max[j] = a[j];
    if (out_argmax) out_argmax[j] = 0;
  }
  for (std::size_t i = 1; i < m; ++i) {
    const double* arow = a + i * n;
    std::size_t j = 0;
    if (!out_argmax) {
      for (; j + 4 <= n; j += 4) {
        __m256d cur = _mm256_loadu_pd(out_max + j);
        __m256d v = _mm256_loadu_pd(arow + j);
        __m256d gt = _mm256_cmp_pd(v, cur, _CMP_GT_OQ);
        _mm256_storeu_pd(out_max + j, _mm256_blendv_pd(cur, v, gt));
      }
    }
    for (; j < n; ++j) {
      if (arow[j] > out_max[j]) {
        out_max[j] = arow[j];
        if (out_argmax) out_argmax[j] = i;
      }
    }
  }
}

const KernelTable kAvx2Table = {
    "avx2",         matmul_avx2,
    matmul_tn_avx2, matmul_nt_avx2,
    axpy_avx2,      exp_neg_abs_scale_avx2,
    colwise_max_avx2,
};

}  // namespace

const KernelTable& avx2_table() { return kAvx2Table; }

bool avx2_supported() { return __builtin_cpu_supports("avx2"); }

#else

const KernelTable& avx2_table() { return scalar_table(); }
bool avx2_supported() { return false; }

#endif

}  // namespace setnovo::kernels
