#pragma once

#include <array>
#include <complex>
#include <optional>

namespace chiral::mobius {

using Complex = std::complex<double>;

inline constexpr double kGeoTol = 1e-10;
inline constexpr double kTwoPi = 6.283185307179586476925286766559;
inline constexpr double kPi = 3.14159265358979323846264338327950;

// Wraps any angle into [0, 2π).
double normalize_angle(double theta);
// Signed difference a − b wrapped into (−π, π].
double angle_diff(double a, double b);

class CirclePoint {
 public:
  CirclePoint() = default;
  explicit CirclePoint(double theta) : theta_(normalize_angle(theta)) {}
  static CirclePoint from_complex(Complex z);

  double theta() const { return theta_; }
  Complex z() const { return std::polar(1.0, theta_); }

 private:
  double theta_ = 0.0;
};

// Arc-length distance on S¹.
double circle_distance(CirclePoint p, CirclePoint q);
bool approx_equal(CirclePoint p, CirclePoint q, double tol = kGeoTol);

// Open arc running anticlockwise from start to end. Travelling anticlockwise
// from a point outside the arc, start is the first endpoint met.
class Interval {
 public:
  Interval(CirclePoint start, CirclePoint end);

  CirclePoint start() const { return start_; }
  CirclePoint end() const { return end_; }
  double length() const;
  CirclePoint midpoint() const;
  // Anticlockwise angle from start to p, in [0, 2π).
  double offset(CirclePoint p) const;
  bool contains(CirclePoint p, double tol = 0.0) const;
  Interval complement() const { return Interval(end_, start_); }

  static Interval upper_half() { return Interval(CirclePoint(0.0), CirclePoint(kPi)); }

 private:
  CirclePoint start_;
  CirclePoint end_;
};

// Closures disjoint.
bool distant(const Interval& a, const Interval& b, double tol = kGeoTol);

// f(e^{iθ}) = c0 + c1·cosθ + c2·sinθ
struct MobiusField {
  double c0 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;

  double operator()(double theta) const;
  double derivative(double theta) const;
  double second_derivative(double theta) const;

  MobiusField operator+(const MobiusField& o) const { return {c0 + o.c0, c1 + o.c1, c2 + o.c2}; }
  MobiusField operator-(const MobiusField& o) const { return {c0 - o.c0, c1 - o.c1, c2 - o.c2}; }
  MobiusField operator-() const { return {-c0, -c1, -c2}; }
  MobiusField operator*(double s) const { return {c0 * s, c1 * s, c2 * s}; }
  double max_abs_diff(const MobiusField& o) const;

  static MobiusField rotation() { return {1.0, 0.0, 0.0}; }
  // t = 1/2 − cosθ/2, generator of translations fixing 1.
  static MobiusField translation() { return {0.5, -0.5, 0.0}; }
  // d = sinθ, generator of the dilations of the upper half circle.
  static MobiusField dilation() { return {0.0, 0.0, 1.0}; }
};

// Unique Möbius field with the prescribed values at three distinct points.
MobiusField field_through(const std::array<CirclePoint, 3>& points, const std::array<double, 3>& values);

// z ↦ (az + b)/(conj(b)z + conj(a)), |a|² − |b|² = 1.
class MobiusElement {
 public:
  MobiusElement() : a_(1.0, 0.0), b_(0.0, 0.0) {}
  // Rescales (a,b) onto |a|² − |b|² = 1 and picks the canonical sign.
  // Throws std::invalid_argument if |a|² − |b|² is not positive.
  MobiusElement(Complex a, Complex b);

  Complex a() const { return a_; }
  Complex b() const { return b_; }

  Complex apply(Complex z) const;
  CirclePoint apply(CirclePoint p) const;
  // g′(z) > 0 in the angular sense: dΘ/dθ.
  double derivative(CirclePoint p) const;
  double second_derivative(CirclePoint p) const;
  MobiusElement inverse() const;

  static MobiusElement identity() { return {}; }
  static MobiusElement rotation(double alpha);
  // Cayley-line translation x ↦ x + a.
  static MobiusElement translation(double a);
  // Fixes ±1, preserves the upper half circle, δ_s′(±1) = e^{±s}.
  static MobiusElement dilation(double s);

 private:
  Complex a_;
  Complex b_;
};

// g∘h
MobiusElement compose(const MobiusElement& g, const MobiusElement& h);
inline MobiusElement operator*(const MobiusElement& g, const MobiusElement& h) { return compose(g, h); }

struct PointAndDerivative {
  CirclePoint point;
  double derivative;
};
PointAndDerivative apply_and_derivative(const MobiusElement& g, CirclePoint p);

// Distance between the maps, insensitive to the (a,b) ~ (−a,−b) ambiguity.
double distance(const MobiusElement& g, const MobiusElement& h);
bool approx_equal(const MobiusElement& g, const MobiusElement& h, double tol = kGeoTol);

enum class OneParameterKind { rotation, translation, dilation };
MobiusElement one_parameter(OneParameterKind kind, double param);

// Some φ with φ(S¹₊) = I, φ(1) = I.start, φ(−1) = I.end.
MobiusElement standard_chart(const Interval& interval);
MobiusElement interval_dilation(const Interval& interval, double s);
// Generator of interval_dilation(I, ·); vanishes at both endpoints, d′ = +1 at start.
MobiusField interval_dilation_field(const Interval& interval);

// x = i(1+z)/(1−z); nullopt at z = 1.
std::optional<double> cayley(CirclePoint p);
CirclePoint cayley_inv(double x);

// Unique φ with φ(src[j]) = dst[j]; both triples distinct and anticlockwise.
MobiusElement interp3(const std::array<CirclePoint, 3>& src, const std::array<CirclePoint, 3>& dst);

struct Iwasawa {
  double alpha;
  double a;
  double s;
};
// g = rotation(alpha)∘translation(a)∘dilation(s)
Iwasawa iwasawa_decompose(const MobiusElement& g);
MobiusElement iwasawa_recompose(const Iwasawa& parts);

MobiusElement field_exp(const MobiusField& f, double t);
// (φ′·f)∘φ⁻¹
MobiusField pushforward(const MobiusElement& phi, const MobiusField& f);

// True when p, q, r are distinct and met in this order travelling anticlockwise.
bool anticlockwise(CirclePoint p, CirclePoint q, CirclePoint r, double tol = kGeoTol);

}  // namespace chiral::mobius
