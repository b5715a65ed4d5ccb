#pragma once

#include <cstddef>

namespace chiral::simd {

enum class Isa { scalar, avx2, neon };

struct KernelTable {
  double (*dot)(const double* x, const double* y, std::size_t n);
  // y += a·x
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // y = A·x, A row-major rows×cols
  void (*matvec)(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y);
  // Σ w_k·|re_k + i·im_k|
  double (*weighted_abs_sum)(const double* re, const double* im, const double* w, std::size_t n);
  // out_j = a0 + Σ_{k=1..n} (ca[k-1]·cos kθ_j + sa[k-1]·sin kθ_j) for j < m
  void (*trig_series)(double a0, const double* ca, const double* sa, std::size_t n,
                      const double* theta, double* out, std::size_t m);
};

bool isa_supported(Isa isa);
const char* isa_name(Isa isa);

// Best supported ISA, unless CHIRAL_SIMD=scalar is set in the environment.
Isa active_isa();

const KernelTable& kernels();
const KernelTable& kernels_for(Isa isa);

}  // namespace chiral::simd
