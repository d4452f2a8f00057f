#pragma once

#include <complex>
#include <cstddef>
#include <string_view>

namespace parfell::kernels {

using Complex = std::complex<double>;

enum class Isa { Scalar, Avx2 };

/// Inner loops of the dense complex arithmetic. Every entry has a portable
/// scalar reference; the AVX2+FMA variant must agree with it to rounding.
/// All matrices are row-major with interleaved (re, im) storage.
struct Table {
  Isa isa;
  std::string_view name;
  /// c (m x n) = a (m x k) * b (k x n); c is overwritten.
  void (*cgemm)(const Complex* a, const Complex* b, Complex* c, std::size_t m, std::size_t k, std::size_t n);
  /// y += alpha * x
  void (*caxpy)(Complex alpha, const Complex* x, Complex* y, std::size_t len);
  /// sum |x_i|^2
  double (*sum_abs2)(const Complex* x, std::size_t len);
};

const Table& scalar_table();
/// nullptr unless compiled in and supported by the running CPU.
const Table* avx2_table();

/// Dispatch target chosen once per process: PARFELL_KERNEL=scalar|avx2 when
/// set, otherwise the widest supported variant.
const Table& active();

bool cpu_supports_avx2();

}  // namespace parfell::kernels
