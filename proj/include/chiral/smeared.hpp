#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "chiral/circlefn.hpp"
#include "chiral/level_module.hpp"
#include "chiral/report.hpp"
#include "chiral/verma.hpp"

namespace chiral::smeared {

using circlefn::FourierFunction;
using Complex = std::complex<double>;

// Compression of T(f) = Σ f̂_n L_n to the levels ≤ cutoff of a module.
struct TruncatedOperator {
  std::string module_tag;
  int cutoff = 0;
  // Products of at most one further mode of degree ≤ cutoff − safe_level stay exact.
  int safe_level = 0;
  Eigen::MatrixXcd matrix;
  std::vector<std::string> warnings;
};

// Highest |n| with f̂_n ≠ 0.
int degree(const FourierFunction& f);
TruncatedOperator smear(const FourierFunction& f, const LevelModule& module);

// Real trigonometric polynomials of degree ≤ max_degree with coefficients ~ 1/(1+|n|²).
std::vector<FourierFunction> random_test_functions(int count, int max_degree, std::uint64_t seed);

// ‖T(f)v‖ ≤ √(1+c/12)‖f‖₃⁄₂‖(1+L₀)v‖ for every f and random v on levels ≤ N − deg f;
// ‖L_n v‖ ≤ √(1+c/12)(1+|n|^{3/2})‖(1+L₀)v‖ for |n| ≤ max_mode;
// ‖T(f₁)T(f₂)v‖ ≤ 2(r₁r₂ + r₃)‖(1+L₀²)v‖ for consecutive pairs.
Report energy_bound_verify(const LevelModule& module, const std::vector<FourierFunction>& fs, int vectors,
                           std::uint64_t seed, int max_mode = 6);

std::vector<double> log_grid(double lo, double hi, int per_decade);
// ‖[L_n, e^{−εL₀}]v‖ ≤ √(3(1+c/12)|n|³)‖v‖ for 0 < |n| ≤ max_mode, every ε in the grid.
Report commutator_norm_bound(const LevelModule& module, int max_mode, const std::vector<double>& eps_grid,
                             int vectors, std::uint64_t seed);
// [L_n, e^{−εL₀}] restricted to level k is (e^{−ε(h+k)} − e^{−ε(h+k−n)})L_n.
double commutator_level_factor(double h, int k, int n, double eps);

// ‖smear(f_k) − smear(f)‖ ≤ √(1+c/12)‖f_k − f‖₃⁄₂(1 + h + N).
Report continuity_check(const FourierFunction& f, const std::vector<FourierFunction>& approximants,
                        const LevelModule& module);
// smear(αf + g) = α·smear(f) + smear(g).
Report linearity_check(const FourierFunction& f, const FourierFunction& g, double alpha, const LevelModule& module);

// Trigonometric polynomial with exact coefficients, n ↦ f̂_n.
using ExactTrig = std::map<int, QComplex>;
// (g,f) = −Σ ĝ_{−n}(in)(1 − n²)f̂_n
QComplex central_pairing(const ExactTrig& g, const ExactTrig& f);
// g f′ − g′ f
ExactTrig wronskian(const ExactTrig& g, const ExactTrig& f);
// [T(g),T(f)] = iT(gf′ − g′f) + i(c/12)(g,f) on Verma basis vectors of level ≤ max_level.
Report tt_commutator_check(const ExactTrig& f, const ExactTrig& g, const verma::VirasoroParams& params,
                           int max_level);

// r + s/π with r, s exact.
struct PiRational {
  QComplex rational;
  QComplex over_pi;
  Complex value() const;
};
// t⁽ⁿ⁾ = 1/(2n) − cos(nθ)/(2n)
ExactTrig t_field(int n);
// Coefficients of t⁽²⁾ restricted to [0, π] (plus) or [π, 2π] (minus).
PiRational t2_plus_coeff(int n);
PiRational t2_minus_coeff(int n);
circlefn::PiecewiseTrig t2_plus_function();
circlefn::PiecewiseTrig t2_minus_function();

struct T2SplitOptions {
  int coeff_cutoff = 64;
  int cauchy_step = 4;
  double cauchy_threshold = 0.05;
};
// Coefficient identity, C¹ and positivity of t⁽²⁾₊, the bound λ_min(T(t⁽²⁾)) ≥ −c/32 at
// cutoff N, Möb⁽²⁾ relations, and |λ_min(N) − λ_min(N + step)| for T(t⁽²⁾_±).
Report t2_split(const verma::VirasoroParams& params, int cutoff, const T2SplitOptions& opts = {});

}  // namespace chiral::smeared
