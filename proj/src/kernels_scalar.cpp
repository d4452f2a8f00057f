#include <cstdlib>
#include <string>

#include "parfell/kernels.hpp"

namespace parfell::kernels {

namespace {

void cgemm_scalar(const Complex* a, const Complex* b, Complex* c, std::size_t m, std::size_t k, std::size_t n) {
  for (std::size_t i = 0; i < m * n; ++i) c[i] = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    Complex* crow = c + i * n;
    for (std::size_t p = 0; p < k; ++p) {
      const double ar = a[i * k + p].real();
      const double ai = a[i * k + p].imag();
      if (ar == 0.0 && ai == 0.0) continue;
      const Complex* brow = b + p * n;
      for (std::size_t j = 0; j < n; ++j) {
        const double br = brow[j].real(), bi = brow[j].imag();
        crow[j] = Complex(crow[j].real() + (ar * br - ai * bi), crow[j].imag() + (ar * bi + ai * br));
      }
    }
  }
}

void caxpy_scalar(Complex alpha, const Complex* x, Complex* y, std::size_t len) {
  const double ar = alpha.real(), ai = alpha.imag();
  for (std::size_t i = 0; i < len; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    y[i] = Complex(y[i].real() + (ar * xr - ai * xi), y[i].imag() + (ar * xi + ai * xr));
  }
}

double sum_abs2_scalar(const Complex* x, std::size_t len) {
  double s = 0.0;
  for (std::size_t i = 0; i < len; ++i) s += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  return s;
}

constexpr Table kScalar{Isa::Scalar, "scalar", cgemm_scalar, caxpy_scalar, sum_abs2_scalar};

}  // namespace

const Table& scalar_table() { return kScalar; }

bool cpu_supports_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const Table& active() {
  static const Table& chosen = [] () -> const Table& {
    const char* env = std::getenv("PARFELL_KERNEL");
    const std::string want = env ? env : "";
    if (want == "scalar") return scalar_table();
    if (const Table* t = avx2_table()) return *t;
    return scalar_table();
  }();
  return chosen;
}

}  // namespace parfell::kernels
