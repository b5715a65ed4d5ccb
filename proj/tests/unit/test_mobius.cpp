#include <cmath>
#include <random>

#include "chiral/mobius.hpp"
#include "doctest.h"

using namespace chiral::mobius;

namespace {

MobiusElement random_element(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ang(0.0, kTwoPi);
  std::uniform_real_distribution<double> par(-2.0, 2.0);
  return MobiusElement::rotation(ang(rng)) * MobiusElement::translation(par(rng)) *
         MobiusElement::dilation(par(rng));
}

// Angular derivative by central differences of arg g(e^{iθ}).
double fd_derivative(const MobiusElement& g, double theta, double h = 1e-6) {
  const double up = std::arg(g.apply(std::polar(1.0, theta + h)));
  const double dn = std::arg(g.apply(std::polar(1.0, theta - h)));
  return angle_diff(up, dn) / (2.0 * h);
}

}  // namespace

TEST_CASE("circle points and intervals") {
  CHECK(CirclePoint(-kPi / 2).theta() == doctest::Approx(3 * kPi / 2));
  CHECK(CirclePoint(kTwoPi).theta() == 0.0);
  Interval upper = Interval::upper_half();
  CHECK(upper.contains(CirclePoint(kPi / 2)));
  CHECK_FALSE(upper.contains(CirclePoint(3 * kPi / 2)));
  CHECK(upper.complement().contains(CirclePoint(3 * kPi / 2)));
  Interval wrap(CirclePoint(5.5), CirclePoint(0.5));
  CHECK(wrap.contains(CirclePoint(0.0)));
  CHECK(wrap.length() == doctest::Approx(kTwoPi - 5.0));
  CHECK_THROWS_AS(Interval(CirclePoint(1.0), CirclePoint(1.0)), std::invalid_argument);
  CHECK(distant(Interval(CirclePoint(0.1), CirclePoint(1.0)), Interval(CirclePoint(2.0), CirclePoint(3.0))));
  CHECK_FALSE(distant(Interval(CirclePoint(0.1), CirclePoint(2.0)), Interval(CirclePoint(2.0), CirclePoint(3.0))));
  CHECK_FALSE(distant(Interval(CirclePoint(0.1), CirclePoint(2.5)), Interval(CirclePoint(2.0), CirclePoint(3.0))));
}

TEST_CASE("canonical sign and group laws") {
  MobiusElement g(Complex(-2.0, 0.5), Complex(1.0, -0.3));
  CHECK(g.a().real() > 0.0);
  CHECK(std::norm(g.a()) - std::norm(g.b()) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(MobiusElement(Complex(0.5), Complex(1.0)), std::invalid_argument);

  std::mt19937_64 rng(7);
  for (int i = 0; i < 50; ++i) {
    auto x = random_element(rng), y = random_element(rng), z = random_element(rng);
    CHECK(distance((x * y) * z, x * (y * z)) < 1e-10);
    CHECK(distance(x.inverse() * x, MobiusElement::identity()) < 1e-10);
    CHECK(distance(compose(MobiusElement::identity(), x), x) < 1e-13);
    const Complex w = std::polar(1.0, 0.37 * i);
    CHECK(std::abs((x * y).apply(w) - x.apply(y.apply(w))) < 1e-10);
  }
}

TEST_CASE("derivatives agree with finite differences and stay positive") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 30; ++i) {
    auto g = random_element(rng);
    for (double th = 0.1; th < kTwoPi; th += 0.7) {
      const double d = g.derivative(CirclePoint(th));
      CHECK(d > 0.0);
      CHECK(d == doctest::Approx(fd_derivative(g, th)).epsilon(1e-6));
      const double h = 1e-5;
      const double dd = (g.derivative(CirclePoint(th + h)) - g.derivative(CirclePoint(th - h))) / (2 * h);
      CHECK(g.second_derivative(CirclePoint(th)) == doctest::Approx(dd).epsilon(1e-5).scale(1.0));
    }
  }
}

TEST_CASE("one-parameter groups") {
  for (int k = -3; k <= 3; ++k) {
    const double s = k;
    auto d = MobiusElement::dilation(s);
    auto at_one = apply_and_derivative(d, CirclePoint(0.0));
    auto at_minus = apply_and_derivative(d, CirclePoint(kPi));
    CHECK(at_one.point.theta() == 0.0);
    CHECK(circle_distance(at_minus.point, CirclePoint(kPi)) < 1e-13);
    CHECK(std::abs(at_one.derivative - std::exp(s)) <= 1e-12 * std::exp(s));
    CHECK(std::abs(at_minus.derivative - std::exp(-s)) <= 1e-12 * std::exp(-s) + 1e-15);
    CHECK(Interval::upper_half().contains(d.apply(CirclePoint(kPi / 2))));
    CHECK(distance(MobiusElement::dilation(s) * MobiusElement::dilation(0.5), MobiusElement::dilation(s + 0.5)) < 1e-12);
  }
  CHECK(distance(MobiusElement::dilation(0.0), MobiusElement::identity()) == 0.0);
  for (double a : {-3.0, 0.2, 5.0}) {
    auto t = MobiusElement::translation(a);
    CHECK(t.apply(CirclePoint(0.0)).theta() == doctest::Approx(0.0));
    // Cayley coordinate shifts by a
    for (double x : {-2.0, 0.0, 1.5}) {
      CHECK(*cayley(t.apply(cayley_inv(x))) == doctest::Approx(x + a).epsilon(1e-12));
    }
  }
  auto r = MobiusElement::rotation(0.9);
  auto rd = apply_and_derivative(r, CirclePoint(1.1));
  CHECK(rd.point.theta() == doctest::Approx(2.0));
  CHECK(rd.derivative == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("dilations scale translations") {
  for (double s : {-1.5, 0.3, 2.0}) {
    for (double a : {-1.0, 0.7}) {
      auto lhs = MobiusElement::dilation(-s) * MobiusElement::translation(a) * MobiusElement::dilation(s);
      CHECK(distance(lhs, MobiusElement::translation(std::exp(s) * a)) < 1e-12);
    }
  }
}

TEST_CASE("cayley transform") {
  CHECK(*cayley(CirclePoint(kPi)) == doctest::Approx(0.0).scale(1.0));
  CHECK(*cayley(CirclePoint(kPi / 2)) == doctest::Approx(-1.0));
  CHECK_FALSE(cayley(CirclePoint(0.0)).has_value());
  for (double th = 0.05; th < kTwoPi; th += 0.31) {
    const Complex z = std::polar(1.0, th);
    const Complex direct = Complex(0, 1) * (1.0 + z) / (1.0 - z);
    CHECK(std::abs(direct.imag()) < 1e-12);
    CHECK(*cayley(CirclePoint(th)) == doctest::Approx(direct.real()).epsilon(1e-12));
    CHECK(circle_distance(cayley_inv(*cayley(CirclePoint(th))), CirclePoint(th)) < 1e-12);
  }
}

TEST_CASE("interval dilations") {
  for (double s : {-2.0, 0.5, 1.0}) {
    CHECK(distance(interval_dilation(Interval::upper_half(), s), MobiusElement::dilation(s)) < 1e-12);
  }
  Interval i(CirclePoint(5.9), CirclePoint(1.2));
  for (double s : {-1.0, 0.4, 2.5}) {
    auto d = interval_dilation(i, s);
    CHECK(approx_equal(d.apply(i.start()), i.start(), 1e-12));
    CHECK(approx_equal(d.apply(i.end()), i.end(), 1e-12));
    CHECK(d.derivative(i.start()) == doctest::Approx(std::exp(s)).epsilon(1e-12));
    CHECK(d.derivative(i.end()) == doctest::Approx(std::exp(-s)).epsilon(1e-12));
    CHECK(i.contains(d.apply(i.midpoint())));
    CHECK(distance(d, interval_dilation(i.complement(), -s)) < 1e-12);
    // chart independence
    auto other = interp3({CirclePoint(0.0), CirclePoint(0.3), CirclePoint(kPi)},
                         {i.start(), CirclePoint(6.2), i.end()});
    CHECK(distance(d, other * MobiusElement::dilation(s) * other.inverse()) < 1e-11);
  }
  auto f = interval_dilation_field(i);
  CHECK(std::abs(f(i.start().theta())) < 1e-12);
  CHECK(std::abs(f(i.end().theta())) < 1e-12);
  CHECK(f.derivative(i.start().theta()) == doctest::Approx(1.0));
  CHECK(f.derivative(i.end().theta()) == doctest::Approx(-1.0));
}

TEST_CASE("interp3") {
  std::array<CirclePoint, 3> base{CirclePoint(0.0), CirclePoint(kPi / 2), CirclePoint(kPi)};
  CHECK(distance(interp3(base, base), MobiusElement::identity()) < 1e-14);
  const double alpha = 2.2;
  std::array<CirclePoint, 3> rotated{CirclePoint(alpha), CirclePoint(kPi / 2 + alpha), CirclePoint(kPi + alpha)};
  CHECK(distance(interp3(base, rotated), MobiusElement::rotation(alpha)) < 1e-12);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ang(0.0, kTwoPi);
  for (int n = 0; n < 200; ++n) {
    auto triple = [&] {
      std::array<double, 3> t{ang(rng), ang(rng), ang(rng)};
      std::sort(t.begin(), t.end());
      return std::array<CirclePoint, 3>{CirclePoint(t[0]), CirclePoint(t[1]), CirclePoint(t[2])};
    };
    auto src = triple(), dst = triple();
    if (!anticlockwise(src[0], src[1], src[2], 1e-3) || !anticlockwise(dst[0], dst[1], dst[2], 1e-3)) continue;
    auto g = interp3(src, dst);
    for (int j = 0; j < 3; ++j) CHECK(circle_distance(g.apply(src[j]), dst[j]) < 1e-10);
    auto g2 = interp3(src, dst);
    CHECK(g.a() == g2.a());
    CHECK(g.b() == g2.b());
  }
  CHECK_THROWS_AS(interp3(base, {CirclePoint(0.0), CirclePoint(kPi), CirclePoint(kPi / 2)}), std::invalid_argument);
  CHECK_THROWS_AS(interp3(base, {CirclePoint(0.0), CirclePoint(0.0), CirclePoint(1.0)}), std::invalid_argument);
}

TEST_CASE("iwasawa") {
  auto id = iwasawa_decompose(MobiusElement::identity());
  CHECK(id.alpha == 0.0);
  CHECK(id.a == doctest::Approx(0.0).scale(1.0));
  CHECK(id.s == doctest::Approx(0.0).scale(1.0));
  auto dil = iwasawa_decompose(MobiusElement::dilation(1.3));
  CHECK(dil.alpha == doctest::Approx(0.0).scale(1.0));
  CHECK(dil.a == doctest::Approx(0.0).scale(1.0));
  CHECK(dil.s == doctest::Approx(1.3));
  auto parts = iwasawa_decompose(iwasawa_recompose({1.0, -0.4, 0.8}));
  CHECK(parts.alpha == doctest::Approx(1.0));
  CHECK(parts.a == doctest::Approx(-0.4));
  CHECK(parts.s == doctest::Approx(0.8));
  std::mt19937_64 rng(5);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    auto g = random_element(rng);
    worst = std::max(worst, distance(iwasawa_recompose(iwasawa_decompose(g)), g));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("field exponential") {
  CHECK(distance(field_exp(MobiusField::rotation(), 1.1), MobiusElement::rotation(1.1)) < 1e-14);
  CHECK(distance(field_exp(MobiusField::dilation(), 0.7), MobiusElement::dilation(0.7)) < 1e-14);
  CHECK(distance(field_exp(MobiusField::translation() * 2.0, 0.9), MobiusElement::translation(0.9)) < 1e-14);
  MobiusField f{0.3, -1.2, 0.8};
  MobiusField g{2.0, 0.5, -0.1};
  for (const auto& h : {f, g}) {
    CHECK(distance(field_exp(h, 0.4) * field_exp(h, 0.35), field_exp(h, 0.75)) < 1e-12);
  }
  // generator check: d/dt Exp(tf)(z) at t=0 equals f(z)
  const double t = 1e-6;
  for (double th = 0.2; th < kTwoPi; th += 0.9) {
    const double moved = field_exp(f, t).apply(CirclePoint(th)).theta();
    CHECK(angle_diff(moved, th) / t == doctest::Approx(f(th)).epsilon(1e-5));
  }
}

TEST_CASE("pushforward of fields") {
  std::mt19937_64 rng(9);
  MobiusField f{0.3, -1.2, 0.8};
  for (int i = 0; i < 20; ++i) {
    auto phi = random_element(rng);
    auto pf = pushforward(phi, f);
    for (double th = 0.1; th < kTwoPi; th += 0.8) {
      const CirclePoint w(th);
      const CirclePoint pre = phi.inverse().apply(w);
      CHECK(pf(th) == doctest::Approx(phi.derivative(pre) * f(pre.theta())).epsilon(1e-10));
    }
  }
  auto through = field_through({CirclePoint(0.1), CirclePoint(2.0), CirclePoint(4.0)}, {1.0, -2.0, 0.5});
  CHECK(through(0.1) == doctest::Approx(1.0));
  CHECK(through(2.0) == doctest::Approx(-2.0));
  CHECK(through(4.0) == doctest::Approx(0.5));
}
