#pragma once

// Dense double-precision inner loops. Every kernel has a scalar reference
// implementation; vectorized variants (AVX2+FMA on x86-64, NEON on aarch64)
// are picked once at first use from what the running CPU supports.
//
// Set DST_KERNELS=scalar in the environment to force the reference path.

#include <cstddef>
#include <span>
#include <string_view>

namespace dst::kernels {

struct KernelTable {
  const char* name;
  // sum_i x[i] * y[i]
  double (*dot)(const double* x, const double* y, std::size_t n);
  // y += a * x
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // y = A x, A row-major rows x cols
  void (*matvec)(const double* a, const double* x, double* y, std::size_t rows,
                 std::size_t cols);
  // Plane rotation of two rows: x' = c x - s y, y' = s x + c y
  void (*rotate)(double* x, double* y, double c, double s, std::size_t n);
  // C = A B, all row-major; A is m x k, B is k x n
  void (*gemm)(const double* a, const double* b, double* c, std::size_t m,
               std::size_t k, std::size_t n);
};

const KernelTable& scalar_table();

// nullptr when the variant is not compiled in or the CPU lacks support.
const KernelTable* avx2_table();
const KernelTable* neon_table();

// Table used by the library. Resolved once; see select() for overriding.
const KernelTable& active();

// Force a variant by name ("scalar", "avx2", "neon", "auto"). Returns false
// if the variant is unavailable, leaving the selection unchanged. Not
// thread-safe against concurrent kernel calls; call at startup.
bool select(std::string_view name);

inline double dot(std::span<const double> x, std::span<const double> y) {
  return active().dot(x.data(), y.data(), x.size());
}

inline void axpy(double a, std::span<const double> x, std::span<double> y) {
  active().axpy(a, x.data(), y.data(), x.size());
}

inline void rotate(std::span<double> x, std::span<double> y, double c,
                   double s) {
  active().rotate(x.data(), y.data(), c, s, x.size());
}

}  // namespace dst::kernels
