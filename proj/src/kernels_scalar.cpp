#include "setnovo/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace setnovo::kernels {
namespace {

void matmul_scalar(const double* a, const double* b, double* c, std::size_t m,
                   std::size_t k, std::size_t n) {
  std::fill(c, c + m * n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    double* crow = c + i * n;
    for (std::size_t p = 0; p < k; ++p) {
      double av = a[i * k + p];
      const double* brow = b + p * n;
      for (std::size_t j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  }
}

void matmul_tn_scalar(const double* a, const double* b, double* c,
                      std::size_t m, std::size_t k, std::size_t n) {
  std::fill(c, c + m * n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    double* crow = c + i * n;
    for (std::size_t p = 0; p < k; ++p) {
      double av = a[p * m + i];
      const double* brow = b + p * n;
      for (std::size_t j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  }
}

void matmul_nt_scalar(const double* a, const double* b, double* c,
                      std::size_t m, std::size_t k, std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) {
    const double* arow = a + i * k;
    for (std::size_t j = 0; j < n; ++j) {
      const double* brow = b + j * k;
      double acc = 0.0;
      for (std::size_t p = 0; p < k; ++p) acc += arow[p] * brow[p];
      c[i * n + j] = acc;
    }
  }
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void exp_neg_abs_scale_scalar(const double* x, double* out, std::size_t n,
                              double scale) {
  for (std::size_t i = 0; i < n; ++i) {
    double t = scale * std::fabs(x[i]);
    out[i] = t > kExpUnderflowCutoff ? 0.0 : std::exp(-t);
  }
}

void colwise_max_scalar(const double* a, double* out_max,
                        std::size_t* out_argmax, std::size_t m,
                        std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    out_max[j] = a[j];
    if (out_argmax) out_argmax[j] = 0;
  }
  for (std::size_t i = 1; i < m; ++i) {
    const double* arow = a + i * n;
    for (std::size_t j = 0; j < n; ++j) {
      if (arow[j] > out_max[j]) {
        out_max[j] = arow[j];
        if (out_argmax) out_argmax[j] = i;
      }
    }
  }
}

const KernelTable kScalarTable = {
    "scalar",        matmul_scalar,
    matmul_tn_scalar, matmul_nt_scalar,
    axpy_scalar,     exp_neg_abs_scale_scalar,
    colwise_max_scalar,
};

}  // namespace

const KernelTable& scalar_table() { return kScalarTable; }

}  // namespace setnovo::kernels
