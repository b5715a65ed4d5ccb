#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include "chiral/mobius.hpp"

namespace chiral::pcwmob {
class PcwField;
}

namespace chiral::circlefn {

using Complex = std::complex<double>;

inline constexpr int kDefaultCutoff = 256;

// Real function on S¹ through its coefficients f̂_n, |n| ≤ N.
class FourierFunction {
 public:
  explicit FourierFunction(int cutoff = 0);
  FourierFunction(int cutoff, std::vector<Complex> coeffs);

  int cutoff() const { return cutoff_; }
  Complex coeff(int n) const;
  void set_coeff(int n, Complex value);
  // Also sets f̂_{−n} = conj(value).
  void set_real_pair(int n, Complex value);
  const std::vector<Complex>& coeffs() const { return coeffs_; }

  // |f̂_n| ≤ C/|n|³ for n ≠ 0, all n including those beyond the cutoff.
  std::optional<double> decay_constant() const { return decay_; }
  void set_decay_constant(std::optional<double> c) { decay_ = c; }

  double operator()(double theta) const;
  double derivative(double theta) const;
  std::vector<double> sample(const std::vector<double>& thetas) const;
  std::vector<double> sample_derivative(const std::vector<double>& thetas) const;

  // max |f̂_{−n} − conj(f̂_n)|
  double reality_defect() const;
  FourierFunction truncated(int cutoff) const;
  FourierFunction derivative_function() const;
  // f(· − alpha)
  FourierFunction rotated(double alpha) const;

  FourierFunction operator+(const FourierFunction& o) const;
  FourierFunction operator-(const FourierFunction& o) const;
  FourierFunction operator*(double s) const;

  static FourierFunction from_mobius_field(const mobius::MobiusField& f);

 private:
  int cutoff_;
  std::vector<Complex> coeffs_;  // index n + cutoff
  std::optional<double> decay_;
};

// Product of two trigonometric polynomials (exact coefficient convolution).
FourierFunction multiply(const FourierFunction& f, const FourierFunction& g);

struct NormValue {
  double partial = 0.0;
  std::optional<double> tail_bound;
  double upper() const { return partial + tail_bound.value_or(0.0); }
};

// Σ|f̂_n|(1 + |n|^{3/2}) over |n| ≤ N, with a tail bound from the decay constant.
NormValue norm_three_half(const FourierFunction& f);
// max|f| + max|f′| on a uniform grid.
double norm_c1(const FourierFunction& f, int samples = 4096);

// Pointwise product of coefficients; the mollifier must have mean 1.
FourierFunction convolve_smooth(const FourierFunction& f, const FourierFunction& mollifier);

// dθ/dt = field(θ) by adaptive Dormand–Prince.
double integrate_flow(const std::function<double(double)>& field, double theta, double t, double tol = 1e-10);
mobius::CirclePoint flow_exp(const FourierFunction& f, mobius::CirclePoint z, double t, double tol = 1e-10);
// ‖f − g‖₁·e^{‖f‖₁}: bound on the time-one displacement between the flows.
double gronwall_bound(const FourierFunction& f, const FourierFunction& g, int samples = 4096);

// Real trigonometric polynomial a₀ + Σ_k (a_k cos kθ + b_k sin kθ); b[0] unused.
struct TrigPiece {
  std::vector<double> a;
  std::vector<double> b;

  double value(double theta, int derivative = 0) const;
  int degree() const { return static_cast<int>(std::max(a.size(), b.size())) - 1; }
};

// Piecewise trigonometric function: piece j lives on [θ_j, θ_{j+1}], cyclically.
class PiecewiseTrig {
 public:
  PiecewiseTrig(std::vector<double> breakpoints, std::vector<TrigPiece> pieces);

  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<TrigPiece>& pieces() const { return pieces_; }
  std::size_t piece_index(double theta) const;
  double value(double theta, int derivative = 0) const;
  // One-sided values at breakpoint j: (from the left piece, from the right piece).
  std::pair<double, double> one_sided(std::size_t j, int derivative) const;
  double c1_defect() const;
  // Total variation of f″ over the circle, jumps included.
  double second_derivative_variation() const;

  // Exact arc integrals of the closed-form antiderivatives.
  FourierFunction fourier(int cutoff) const;

 private:
  std::vector<double> breakpoints_;
  std::vector<TrigPiece> pieces_;
};

PiecewiseTrig to_piecewise_trig(const pcwmob::PcwField& f);
// Exact per-arc Fourier coefficients with the cubic-decay certificate
// C = Var(f″)/2π attached.
FourierFunction fourier_of_pcw_field(const pcwmob::PcwField& f, int cutoff = kDefaultCutoff);

}  // namespace chiral::circlefn
