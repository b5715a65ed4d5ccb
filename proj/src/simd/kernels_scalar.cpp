#include <cmath>

#include "tables.hpp"

namespace chiral::simd::detail {
namespace {

double dot(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void matvec(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y) {
  for (std::size_t r = 0; r < rows; ++r) y[r] = dot(a + r * cols, x, cols);
}

double weighted_abs_sum(const double* re, const double* im, const double* w, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += w[i] * std::sqrt(re[i] * re[i] + im[i] * im[i]);
  return s;
}

void trig_series(double a0, const double* ca, const double* sa, std::size_t n,
                 const double* theta, double* out, std::size_t m) {
  for (std::size_t j = 0; j < m; ++j) {
    const double c1 = std::cos(theta[j]);
    const double s1 = std::sin(theta[j]);
    double c = c1;
    double s = s1;
    double acc = a0;
    for (std::size_t k = 0; k < n; ++k) {
      acc += ca[k] * c + sa[k] * s;
      const double cn = c * c1 - s * s1;
      s = s * c1 + c * s1;
      c = cn;
    }
    out[j] = acc;
  }
}

}  // namespace

const KernelTable scalar_table{dot, axpy, matvec, weighted_abs_sum, trig_series};

}  // namespace chiral::simd::detail
