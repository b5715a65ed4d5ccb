#include "chiral/mobius.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace chiral::mobius {

namespace {

const Complex kI(0.0, 1.0);

using Mat2 = std::array<std::array<Complex, 2>, 2>;

Mat2 to_matrix(const MobiusElement& g) {
  return {{{g.a(), g.b()}, {std::conj(g.b()), std::conj(g.a())}}};
}

Mat2 mul(const Mat2& x, const Mat2& y) {
  Mat2 r{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r[i][j] = x[i][0] * y[0][j] + x[i][1] * y[1][j];
  return r;
}

// su(1,1) element [[iu, v], [conj v, −iu]] for the field c0 + c1 cos + c2 sin.
Mat2 field_matrix(const MobiusField& f) {
  const double u = f.c0 / 2.0;
  const Complex v(-f.c2 / 2.0, f.c1 / 2.0);
  return {{{Complex(0.0, u), v}, {std::conj(v), Complex(0.0, -u)}}};
}

MobiusField field_from_matrix(const Mat2& x) {
  const double u = x[0][0].imag();
  const Complex v = x[0][1];
  return {2.0 * u, 2.0 * v.imag(), -2.0 * v.real()};
}

}  // namespace

double normalize_angle(double theta) {
  double r = std::fmod(theta, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

double angle_diff(double a, double b) {
  double d = normalize_angle(a - b);
  return d > kPi ? d - kTwoPi : d;
}

CirclePoint CirclePoint::from_complex(Complex z) {
  if (std::abs(z) == 0.0) throw std::invalid_argument("zero is not a circle point");
  return CirclePoint(std::arg(z));
}

double circle_distance(CirclePoint p, CirclePoint q) {
  return std::abs(angle_diff(p.theta(), q.theta()));
}

bool approx_equal(CirclePoint p, CirclePoint q, double tol) { return circle_distance(p, q) <= tol; }

Interval::Interval(CirclePoint start, CirclePoint end) : start_(start), end_(end) {
  if (circle_distance(start, end) <= kGeoTol) {
    throw std::invalid_argument("interval endpoints coincide");
  }
}

double Interval::offset(CirclePoint p) const { return normalize_angle(p.theta() - start_.theta()); }

double Interval::length() const { return offset(end_); }

CirclePoint Interval::midpoint() const { return CirclePoint(start_.theta() + length() / 2.0); }

bool Interval::contains(CirclePoint p, double tol) const {
  const double o = offset(p);
  return o > tol && o < length() - tol;
}

bool distant(const Interval& a, const Interval& b, double tol) {
  const Interval outside = a.complement();
  const double s = outside.offset(b.start());
  const double e = outside.offset(b.end());
  return s > tol && e > s && e < outside.length() - tol;
}

bool anticlockwise(CirclePoint p, CirclePoint q, CirclePoint r, double tol) {
  const double oq = normalize_angle(q.theta() - p.theta());
  const double orr = normalize_angle(r.theta() - p.theta());
  return oq > tol && orr > oq + tol && orr < kTwoPi - tol;
}

double MobiusField::operator()(double theta) const {
  return c0 + c1 * std::cos(theta) + c2 * std::sin(theta);
}

double MobiusField::derivative(double theta) const {
  return -c1 * std::sin(theta) + c2 * std::cos(theta);
}

double MobiusField::second_derivative(double theta) const {
  return -c1 * std::cos(theta) - c2 * std::sin(theta);
}

double MobiusField::max_abs_diff(const MobiusField& o) const {
  return std::max({std::abs(c0 - o.c0), std::abs(c1 - o.c1), std::abs(c2 - o.c2)});
}

MobiusField field_through(const std::array<CirclePoint, 3>& points, const std::array<double, 3>& values) {
  Eigen::Matrix3d m;
  Eigen::Vector3d rhs;
  for (int i = 0; i < 3; ++i) {
    const double t = points[i].theta();
    m(i, 0) = 1.0;
    m(i, 1) = std::cos(t);
    m(i, 2) = std::sin(t);
    rhs(i) = values[i];
  }
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      if (circle_distance(points[i], points[j]) <= kGeoTol)
        throw std::invalid_argument("field_through: points not distinct");
  Eigen::Vector3d c = m.fullPivLu().solve(rhs);
  return {c(0), c(1), c(2)};
}

MobiusElement::MobiusElement(Complex a, Complex b) {
  const double det = std::norm(a) - std::norm(b);
  if (!(det > 0.0) || !std::isfinite(det)) {
    throw std::invalid_argument("not a Möbius element: |a|^2 - |b|^2 <= 0");
  }
  const double k = std::sqrt(det);
  a /= k;
  b /= k;
  bool keep;
  if (a.real() != 0.0) {
    keep = a.real() > 0.0;
  } else if (a.imag() != 0.0) {
    keep = a.imag() > 0.0;
  } else {
    keep = b.real() > 0.0;
  }
  a_ = keep ? a : -a;
  b_ = keep ? b : -b;
}

Complex MobiusElement::apply(Complex z) const {
  return (a_ * z + b_) / (std::conj(b_) * z + std::conj(a_));
}

CirclePoint MobiusElement::apply(CirclePoint p) const { return CirclePoint::from_complex(apply(p.z())); }

double MobiusElement::derivative(CirclePoint p) const {
  return 1.0 / std::norm(std::conj(b_) * p.z() + std::conj(a_));
}

double MobiusElement::second_derivative(CirclePoint p) const {
  const Complex z = p.z();
  const Complex w = std::conj(b_) * z + std::conj(a_);
  const double n = std::norm(w);
  return -2.0 * std::real(std::conj(w) * kI * std::conj(b_) * z) / (n * n);
}

MobiusElement MobiusElement::inverse() const { return {std::conj(a_), -b_}; }

MobiusElement MobiusElement::rotation(double alpha) { return {std::polar(1.0, alpha / 2.0), 0.0}; }

MobiusElement MobiusElement::translation(double a) { return {Complex(1.0, a / 2.0), Complex(0.0, -a / 2.0)}; }

MobiusElement MobiusElement::dilation(double s) { return {std::cosh(s / 2.0), -std::sinh(s / 2.0)}; }

MobiusElement compose(const MobiusElement& g, const MobiusElement& h) {
  const Complex a = g.a(), b = g.b(), c = h.a(), d = h.b();
  return {a * c + b * std::conj(d), a * d + b * std::conj(c)};
}

PointAndDerivative apply_and_derivative(const MobiusElement& g, CirclePoint p) {
  return {g.apply(p), g.derivative(p)};
}

double distance(const MobiusElement& g, const MobiusElement& h) {
  const double same = std::max(std::abs(g.a() - h.a()), std::abs(g.b() - h.b()));
  const double flip = std::max(std::abs(g.a() + h.a()), std::abs(g.b() + h.b()));
  return std::min(same, flip);
}

bool approx_equal(const MobiusElement& g, const MobiusElement& h, double tol) { return distance(g, h) <= tol; }

MobiusElement one_parameter(OneParameterKind kind, double param) {
  switch (kind) {
    case OneParameterKind::rotation: return MobiusElement::rotation(param);
    case OneParameterKind::translation: return MobiusElement::translation(param);
    case OneParameterKind::dilation: return MobiusElement::dilation(param);
  }
  throw std::invalid_argument("unknown one-parameter kind");
}

MobiusElement standard_chart(const Interval& interval) {
  return interp3({CirclePoint(0.0), CirclePoint(kPi / 2.0), CirclePoint(kPi)},
                 {interval.start(), interval.midpoint(), interval.end()});
}

MobiusElement interval_dilation(const Interval& interval, double s) {
  const MobiusElement phi = standard_chart(interval);
  return phi * MobiusElement::dilation(s) * phi.inverse();
}

MobiusField interval_dilation_field(const Interval& interval) {
  return pushforward(standard_chart(interval), MobiusField::dilation());
}

std::optional<double> cayley(CirclePoint p) {
  if (p.theta() == 0.0) return std::nullopt;
  const double half = p.theta() / 2.0;
  return -std::cos(half) / std::sin(half);
}

CirclePoint cayley_inv(double x) { return CirclePoint(2.0 * std::atan2(1.0, -x)); }

MobiusElement interp3(const std::array<CirclePoint, 3>& src, const std::array<CirclePoint, 3>& dst) {
  if (!anticlockwise(src[0], src[1], src[2]) || !anticlockwise(dst[0], dst[1], dst[2])) {
    throw std::invalid_argument("interp3: triples must be distinct and anticlockwise");
  }
  const MobiusElement to_one = MobiusElement::rotation(-src[0].theta());
  const MobiusElement from_one = MobiusElement::rotation(dst[0].theta());
  const double x1 = *cayley(CirclePoint(src[1].theta() - src[0].theta()));
  const double x2 = *cayley(CirclePoint(src[2].theta() - src[0].theta()));
  const double y1 = *cayley(CirclePoint(dst[1].theta() - dst[0].theta()));
  const double y2 = *cayley(CirclePoint(dst[2].theta() - dst[0].theta()));
  const double scale = (y2 - y1) / (x2 - x1);
  const double shift = y1 - scale * x1;
  const MobiusElement affine = MobiusElement::translation(shift) * MobiusElement::dilation(-std::log(scale));
  return from_one * affine * to_one;
}

Iwasawa iwasawa_decompose(const MobiusElement& g) {
  const double alpha = g.apply(CirclePoint(0.0)).theta();
  const MobiusElement fixed_one = MobiusElement::rotation(-alpha) * g;
  const Complex w = fixed_one.apply(Complex(-1.0, 0.0));
  const double a = (Complex(0.0, 1.0) * (1.0 + w) / (1.0 - w)).real();
  const MobiusElement residual = MobiusElement::translation(-a) * fixed_one;
  const double s = std::log(residual.derivative(CirclePoint(0.0)));
  return {alpha, a, s};
}

MobiusElement iwasawa_recompose(const Iwasawa& p) {
  return MobiusElement::rotation(p.alpha) * MobiusElement::translation(p.a) * MobiusElement::dilation(p.s);
}

MobiusElement field_exp(const MobiusField& f, double t) {
  Mat2 x = field_matrix(f * t);
  // X² = δ·I with δ = |v|² − u²
  const double delta = std::norm(x[0][1]) - x[0][0].imag() * x[0][0].imag();
  double even, odd;
  if (std::abs(delta) < 1e-8) {
    even = 1.0 + delta / 2.0 + delta * delta / 24.0;
    odd = 1.0 + delta / 6.0 + delta * delta / 120.0;
  } else if (delta > 0.0) {
    const double r = std::sqrt(delta);
    even = std::cosh(r);
    odd = std::sinh(r) / r;
  } else {
    const double r = std::sqrt(-delta);
    even = std::cos(r);
    odd = std::sin(r) / r;
  }
  return {even + odd * x[0][0], odd * x[0][1]};
}

MobiusField pushforward(const MobiusElement& phi, const MobiusField& f) {
  const Mat2 m = to_matrix(phi);
  const Mat2 minv = to_matrix(phi.inverse());
  return field_from_matrix(mul(mul(m, field_matrix(f)), minv));
}

}  // namespace chiral::mobius
