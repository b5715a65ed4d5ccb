#include <arm_neon.h>

#include <cmath>

#include "tables.hpp"

namespace chiral::simd::detail {
namespace {

double dot(const double* x, const double* y, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) acc = vfmaq_f64(acc, vld1q_f64(x + i), vld1q_f64(y + i));
  double s = vaddvq_f64(acc);
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
  for (; i < n; ++i) y[i] += a * x[i];
}

void matvec(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y) {
  for (std::size_t r = 0; r < rows; ++r) y[r] = dot(a + r * cols, x, cols);
}

double weighted_abs_sum(const double* re, const double* im, const double* w, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t r = vld1q_f64(re + i);
    float64x2_t m = vld1q_f64(im + i);
    float64x2_t mag = vsqrtq_f64(vfmaq_f64(vmulq_f64(m, m), r, r));
    acc = vfmaq_f64(acc, vld1q_f64(w + i), mag);
  }
  double s = vaddvq_f64(acc);
  for (; i < n; ++i) s += w[i] * std::sqrt(re[i] * re[i] + im[i] * im[i]);
  return s;
}

void trig_series(double a0, const double* ca, const double* sa, std::size_t n,
                 const double* theta, double* out, std::size_t m) {
  std::size_t j = 0;
  for (; j + 2 <= m; j += 2) {
    const double cs[2] = {std::cos(theta[j]), std::cos(theta[j + 1])};
    const double sn[2] = {std::sin(theta[j]), std::sin(theta[j + 1])};
    const float64x2_t c1 = vld1q_f64(cs);
    const float64x2_t s1 = vld1q_f64(sn);
    float64x2_t c = c1;
    float64x2_t s = s1;
    float64x2_t acc = vdupq_n_f64(a0);
    for (std::size_t k = 0; k < n; ++k) {
      acc = vfmaq_f64(acc, vdupq_n_f64(ca[k]), c);
      acc = vfmaq_f64(acc, vdupq_n_f64(sa[k]), s);
      const float64x2_t cn = vfmsq_f64(vmulq_f64(c, c1), s, s1);
      s = vfmaq_f64(vmulq_f64(s, c1), c, s1);
      c = cn;
    }
    vst1q_f64(out + j, acc);
  }
  if (j < m) scalar_table.trig_series(a0, ca, sa, n, theta + j, out + j, m - j);
}

}  // namespace

const KernelTable neon_table{dot, axpy, matvec, weighted_abs_sum, trig_series};

}  // namespace chiral::simd::detail
