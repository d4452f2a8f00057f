// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include "parfell/kernels.hpp"

#if defined(PARFELL_HAVE_AVX2)
#include <immintrin.h>
#endif

namespace parfell::kernels {

#if defined(PARFELL_HAVE_AVX2)

namespace {

// One __m256d holds two interleaved complex numbers (re0, im0, re1, im1).
inline __m256d cmul_acc(__m256d acc, __m256d ar, __m256d ai, __m256d b) {
  const __m256d bswap = _mm256_permute_pd(b, 0b0101);
  // even lanes: ar*br - ai*bi, odd lanes: ar*bi + ai*br
  return _mm256_add_pd(acc, _mm256_fmaddsub_pd(ar, b, _mm256_mul_pd(ai, bswap)));
}

void cgemm_avx2(const Complex* a, const Complex* b, Complex* c, std::size_t m, std::size_t k, std::size_t n) {
  for (std::size_t i = 0; i < m * n; ++i) c[i] = 0.0;
  const std::size_t n2 = n & ~std::size_t{1};
  for (std::size_t i = 0; i < m; ++i) {
    double* crow = reinterpret_cast<double*>(c + i * n);
    for (std::size_t p = 0; p < k; ++p) {
      const double are = a[i * k + p].real();
      const double aim = a[i * k + p].imag();
      if (are == 0.0 && aim == 0.0) continue;
      const __m256d ar = _mm256_set1_pd(are);
      const __m256d ai = _mm256_set1_pd(aim);
      const double* brow = reinterpret_cast<const double*>(b + p * n);
      std::size_t j = 0;
      for (; j < n2; j += 2) {
        const __m256d bv = _mm256_loadu_pd(brow + 2 * j);
        const __m256d cv = _mm256_loadu_pd(crow + 2 * j);
        _mm256_storeu_pd(crow + 2 * j, cmul_acc(cv, ar, ai, bv));
      }
      for (; j < n; ++j) {
        const double br = brow[2 * j], bi = brow[2 * j + 1];
        crow[2 * j] += are * br - aim * bi;
        crow[2 * j + 1] += are * bi + aim * br;
      }
    }
  }
}

void caxpy_avx2(Complex alpha, const Complex* x, Complex* y, std::size_t len) {
  const __m256d ar = _mm256_set1_pd(alpha.real());
  const __m256d ai = _mm256_set1_pd(alpha.imag());
  const double* xd = reinterpret_cast<const double*>(x);
  double* yd = reinterpret_cast<double*>(y);
  std::size_t i = 0;
  for (; i + 2 <= len; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    const __m256d yv = _mm256_loadu_pd(yd + 2 * i);
    _mm256_storeu_pd(yd + 2 * i, cmul_acc(yv, ar, ai, xv));
  }
  for (; i < len; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    yd[2 * i] += alpha.real() * xr - alpha.imag() * xi;
    yd[2 * i + 1] += alpha.real() * xi + alpha.imag() * xr;
  }
}

double sum_abs2_avx2(const Complex* x, std::size_t len) {
  const double* xd = reinterpret_cast<const double*>(x);
  const std::size_t total = 2 * len;
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= total; i += 4) {
    const __m256d v = _mm256_loadu_pd(xd + i);
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double s = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < total; ++i) s += xd[i] * xd[i];
  return s;
}

constexpr Table kAvx2{Isa::Avx2, "avx2", cgemm_avx2, caxpy_avx2, sum_abs2_avx2};

}  // namespace

const Table* avx2_table() { return cpu_supports_avx2() ? &kAvx2 : nullptr; }

#else

const Table* avx2_table() { return nullptr; }

#endif

}  // namespace parfell::kernels
