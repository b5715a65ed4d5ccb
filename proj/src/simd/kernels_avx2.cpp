#include <immintrin.h>

#include <cmath>

#include "tables.hpp"

namespace chiral::simd::detail {
namespace {

double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

double dot(const double* x, const double* y, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void matvec(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y) {
  for (std::size_t r = 0; r < rows; ++r) y[r] = dot(a + r * cols, x, cols);
}

double weighted_abs_sum(const double* re, const double* im, const double* w, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d r = _mm256_loadu_pd(re + i);
    __m256d m = _mm256_loadu_pd(im + i);
    __m256d mag = _mm256_sqrt_pd(_mm256_fmadd_pd(r, r, _mm256_mul_pd(m, m)));
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(w + i), mag, acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += w[i] * std::sqrt(re[i] * re[i] + im[i] * im[i]);
  return s;
}

void trig_series(double a0, const double* ca, const double* sa, std::size_t n,
                 const double* theta, double* out, std::size_t m) {
  std::size_t j = 0;
  for (; j + 4 <= m; j += 4) {
    alignas(32) double cs[4];
    alignas(32) double sn[4];
    for (int l = 0; l < 4; ++l) {
      cs[l] = std::cos(theta[j + l]);
      sn[l] = std::sin(theta[j + l]);
    }
    const __m256d c1 = _mm256_load_pd(cs);
    const __m256d s1 = _mm256_load_pd(sn);
    __m256d c = c1;
    __m256d s = s1;
    __m256d acc = _mm256_set1_pd(a0);
    for (std::size_t k = 0; k < n; ++k) {
      acc = _mm256_fmadd_pd(_mm256_set1_pd(ca[k]), c, acc);
      acc = _mm256_fmadd_pd(_mm256_set1_pd(sa[k]), s, acc);
      const __m256d cn = _mm256_fmsub_pd(c, c1, _mm256_mul_pd(s, s1));
      s = _mm256_fmadd_pd(s, c1, _mm256_mul_pd(c, s1));
      c = cn;
    }
    _mm256_storeu_pd(out + j, acc);
  }
  if (j < m) scalar_table.trig_series(a0, ca, sa, n, theta + j, out + j, m - j);
}

}  // namespace

const KernelTable avx2_table{dot, axpy, matvec, weighted_abs_sum, trig_series};

}  // namespace chiral::simd::detail
