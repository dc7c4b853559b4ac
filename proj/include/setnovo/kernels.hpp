#pragma once

#include <cstddef>
#include <string>

namespace setnovo::kernels {

// Numeric inner loops used by feature extraction and the network. Each entry
// point has a scalar reference implementation and may have SIMD variants.
// All variants of a kernel must produce bit-identical results; the AVX2
// builds therefore use separate mul/add (no FMA contraction).
struct KernelTable {
  const char* name;

  // C (m x n) = A (m x k) * B (k x n), row-major, C overwritten.
  void (*matmul)(const double* a, const double* b, double* c, std::size_t m,
                 std::size_t k, std::size_t n);

  // C (m x n) = A^T (k x m) * B (k x n).
  void (*matmul_tn)(const double* a, const double* b, double* c, std::size_t m,
                    std::size_t k, std::size_t n);

  // C (m x n) = A (m x k) * B^T (n x k).
  void (*matmul_nt)(const double* a, const double* b, double* c, std::size_t m,
                    std::size_t k, std::size_t n);

  // y[i] += alpha * x[i].
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);

  // out[i] = exp(-scale * |x[i]|), with a hard zero once the argument is
  // past the double underflow point so results do not depend on libm's
  // denormal behavior.
  void (*exp_neg_abs_scale)(const double* x, double* out, std::size_t n,
                            double scale);

  // Column-wise max over an (m x n) row-major matrix; argmax takes the first
  // row attaining the max.
  void (*colwise_max)(const double* a, double* out_max, std::size_t* out_argmax,
                      std::size_t m, std::size_t n);
};

const KernelTable& scalar_table();
const KernelTable& avx2_table();
bool avx2_supported();

// Active table: picked once at startup from CPU features, overridable with
// SETNOVO_KERNELS=scalar|avx2 (an unsupported request falls back to scalar).
const KernelTable& active_table();
void set_active_table(const KernelTable& table);

// Argument past which exp(-x) is treated as exactly zero.
inline constexpr double kExpUnderflowCutoff = 745.0;

}  // namespace setnovo::kernels
