#include "chiral/rational.hpp"
#include "doctest.h"

using namespace chiral;

TEST_CASE("parse and format") {
  CHECK(parse_rational("3/4") == Rational(3, 4));
  CHECK(parse_rational("-6/8") == Rational(-3, 4));
  CHECK(parse_rational("+5") == Rational(5));
  CHECK(parse_rational("0") == Rational(0));
  CHECK(format_rational(Rational(0)) == "0/1");
  CHECK(format_rational(Rational(-3, 7)) == "-3/7");
  CHECK(format_rational(Rational(6, 3)) == "2/1");
  CHECK(format_rational(parse_rational("123456789012345678901234567891/1000000007")) == "123456789012345678901234567891/1000000007");
  for (const char* bad : {"", "1/0", "a/2", "1/-2", "1.5", "1/2/3", "/2", "3/"})
    CHECK_THROWS_AS(parse_rational(bad), std::invalid_argument);
  CHECK(to_double(Rational(1, 3)) == doctest::Approx(1.0 / 3.0).epsilon(1e-16));
}

TEST_CASE("negative denominators normalize under division") {
  CHECK(Rational(1) / -3 == Rational(-1, 3));
  CHECK(format_rational(Rational(2) / -4) == "-1/2");
}

TEST_CASE("complex rationals") {
  const QComplex a(Rational(1, 2), Rational(-1, 3)), b(Rational(2), Rational(3, 4));
  const QComplex p = a * b;
  CHECK(p.re == Rational(1, 2) * 2 + Rational(1, 3) * Rational(3, 4));
  CHECK(p.im == Rational(1, 2) * Rational(3, 4) - Rational(1, 3) * 2);
  CHECK(kI * kI == QComplex(Rational(-1)));
  CHECK((a - a).is_zero());
  CHECK(a.conj().im == Rational(1, 3));
  CHECK(format_qcomplex(QComplex(Rational(1, 2), Rational(-1))) == "1/2 + -1/1i");
}

TEST_CASE("exact linear algebra") {
  RationalMatrix m(3, 3);
  const int v[3][3] = {{2, 1, 0}, {1, 3, 1}, {0, 1, 4}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = v[i][j];
  CHECK(determinant(m) == Rational(2 * (12 - 1) - 1 * 4));
  CHECK(is_positive_semidefinite(m));
  CHECK(null_space(m).empty());
  CHECK(pivot_columns(m).size() == 3);
  CHECK(m.transpose() == m);

  RationalMatrix s(3, 3);
  const int w[3][3] = {{1, 2, 3}, {2, 4, 6}, {1, 0, 1}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) s(i, j) = w[i][j];
  CHECK(determinant(s) == 0);
  const auto ns = null_space(s);
  REQUIRE(ns.size() == 1);
  RationalMatrix x(3, 1);
  for (int i = 0; i < 3; ++i) x(i, 0) = ns[0][i];
  CHECK((s * x).is_zero());
  CHECK(pivot_columns(s) == std::vector<std::size_t>{0, 1});

  RationalMatrix indefinite(2, 2);
  indefinite(0, 0) = 1;
  indefinite(0, 1) = 2;
  indefinite(1, 0) = 2;
  indefinite(1, 1) = 1;
  CHECK_FALSE(is_positive_semidefinite(indefinite));
  RationalMatrix psd(2, 2);
  psd(0, 0) = 1;
  psd(0, 1) = 1;
  psd(1, 0) = 1;
  psd(1, 1) = 1;
  CHECK(is_positive_semidefinite(psd));
  RationalMatrix zero_pivot(2, 2);
  zero_pivot(0, 1) = 1;
  zero_pivot(1, 0) = 1;
  CHECK_FALSE(is_positive_semidefinite(zero_pivot));
}
