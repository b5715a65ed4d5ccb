#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "chiral/circlefn.hpp"
#include "chiral/mobius.hpp"

namespace chiral::pcwmob {

using mobius::CirclePoint;
using mobius::Interval;
using mobius::MobiusElement;
using mobius::MobiusField;

// C² defects above this count as kinks, below kSmoothDefect as smooth.
inline constexpr double kNonSmoothDefect = 1e-6;
inline constexpr double kSmoothDefect = 1e-10;

enum class Smoothness { smooth, ambiguous, nonsmooth };
Smoothness classify_defect(double defect);

// Index of the arc [b_k, b_{k+1}) containing theta, cyclically; breakpoints sorted.
std::size_t arc_index(const std::vector<CirclePoint>& breakpoints, double theta);

// Piece k acts on the arc from breakpoint k to breakpoint k+1 (cyclically).
// No breakpoints means a single global Möbius element.
class PcwMobius {
 public:
  PcwMobius() : pieces_{MobiusElement::identity()} {}
  explicit PcwMobius(const MobiusElement& g) : pieces_{g} {}
  // Sorts (breakpoint, piece) pairs by angle.
  PcwMobius(std::vector<CirclePoint> breakpoints, std::vector<MobiusElement> pieces);

  const std::vector<CirclePoint>& breakpoints() const { return breakpoints_; }
  const std::vector<MobiusElement>& pieces() const { return pieces_; }
  bool is_mobius() const { return breakpoints_.empty(); }
  const MobiusElement& piece_at(CirclePoint p) const;

  CirclePoint apply(CirclePoint p) const;
  double derivative(CirclePoint p) const;
  PcwMobius inverse() const;
  // Drops breakpoints between pieces equal within tol.
  PcwMobius simplified(double tol = mobius::kGeoTol) const;

 private:
  std::vector<CirclePoint> breakpoints_;
  std::vector<MobiusElement> pieces_;
};

// g∘h
PcwMobius compose(const PcwMobius& g, const PcwMobius& h);
inline PcwMobius operator*(const PcwMobius& g, const PcwMobius& h) { return compose(g, h); }
// max circle distance between g(z) and h(z) over a uniform grid.
double sup_distance(const PcwMobius& g, const PcwMobius& h, int samples = 200);

struct BreakpointCheck {
  CirclePoint point;
  double value_gap = 0.0;
  double derivative_gap = 0.0;
  double second_derivative_gap = 0.0;
};
struct C1Report {
  bool ok = true;
  std::vector<BreakpointCheck> breakpoints;
};
// Derivative gaps are relative to max(1, g′).
C1Report c1_check(const PcwMobius& g, double tol = mobius::kGeoTol);
std::vector<double> c2_defect(const PcwMobius& g);

// δ^{I₁}_s, δ^{K₁}_{−s}, δ^{I₂}_s, δ^{K₂}_{−s} on I₁, K₁ = (end I₁, start I₂), I₂, K₂.
PcwMobius kappa(const Interval& i1, const Interval& i2, double s);

struct KappaDescriptor {
  Interval i1;
  Interval i2;
  double s;
};
using Factor = std::variant<MobiusElement, KappaDescriptor>;

struct Decomposition {
  std::vector<Factor> factors;  // g = factors[0]∘factors[1]∘…
  // Smallest arc between the four breakpoints used in any peel step.
  double min_separation = mobius::kTwoPi;
};
Decomposition generator_decompose(const PcwMobius& g);
PcwMobius recompose(const std::vector<Factor>& factors);

// Random C¹ element with exactly six breakpoints, κ(I₁,I₂,s)∘κ(J₁,J₂,t) with
// J₁, J₂ starting where I₁, I₂ start.
PcwMobius random_six_breakpoint(std::uint64_t seed);

// γ with γ(src_n) = dst_n, identity on the complement of `within` when given.
PcwMobius interpolate_points(const std::vector<CirclePoint>& src, const std::vector<CirclePoint>& dst,
                             const std::optional<Interval>& within = std::nullopt);

class PcwField {
 public:
  PcwField() : pieces_{MobiusField{}} {}
  explicit PcwField(const MobiusField& f) : pieces_{f} {}
  PcwField(std::vector<CirclePoint> breakpoints, std::vector<MobiusField> pieces);

  const std::vector<CirclePoint>& breakpoints() const { return breakpoints_; }
  const std::vector<MobiusField>& pieces() const { return pieces_; }
  bool is_mobius() const { return breakpoints_.empty(); }
  const MobiusField& piece_at(double theta) const;

  double operator()(double theta) const { return piece_at(theta)(theta); }
  double derivative(double theta) const { return piece_at(theta).derivative(theta); }
  PcwField simplified(double tol = mobius::kGeoTol) const;
  // (1/2π)∫f dθ, exact per arc.
  double mean() const;
  // f(· − alpha)
  PcwField rotated(double alpha) const;

  PcwField operator+(const PcwField& o) const;
  PcwField operator-(const PcwField& o) const;
  PcwField operator*(double s) const;

 private:
  std::vector<CirclePoint> breakpoints_;
  std::vector<MobiusField> pieces_;
};

C1Report c1_check(const PcwField& f, double tol = mobius::kGeoTol);
std::vector<double> c2_defect(const PcwField& f);
// Per piece max coefficient difference after refining both to common breakpoints.
double piecewise_distance(const PcwField& f, const PcwField& g);

// d^{I₁}, −d^{K₁}, d^{I₂}, −d^{K₂}: the s-derivative of kappa at s = 0.
PcwField kappa_field(const Interval& i1, const Interval& i2);

struct FieldTerm {
  Interval i1;
  Interval i2;
  double lambda;
};
struct FieldDecomposition {
  MobiusField global;
  std::vector<FieldTerm> terms;
};
FieldDecomposition field_span_decompose(const PcwField& f);
PcwField reconstruct(const FieldDecomposition& d);

// Nonnegative, supported in the closure of a subinterval of I, mean 1.
PcwField bump_field(const Interval& interval);

struct ApproxStep {
  int samples = 0;           // N
  double mollifier_width = 0.0;
  PcwField field;            // h_N
  circlefn::NormValue error; // ‖f − h_N‖₃⁄₂ up to kApproxCutoff
  std::optional<bool> supported_in;
};
inline constexpr int kApproxCutoff = 2048;

// h_N = (1/N)Σ_k f(2πk/N)·l(· − 2πk/N) with l a bump of half-width
// 2N^{−1/4} around 1, for N = 8, 16, …, 8·2^{steps−1}. `values` overrides the
// samples f(θ) (e.g. for exactly localized f); `support` turns on the check.
std::vector<ApproxStep> approx_field(const circlefn::FourierFunction& f, int steps,
                                     const std::function<double(double)>& values = {},
                                     const std::optional<Interval>& support = std::nullopt);

}  // namespace chiral::pcwmob
