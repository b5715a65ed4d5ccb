#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace chiral {

using Rational = boost::multiprecision::mpq_rational;

// Accepts "p/q", "-p/q" or an integer; throws std::invalid_argument otherwise.
Rational parse_rational(std::string_view text);

// Always "p/q" with q > 0, e.g. "0/1", "-3/7".
std::string format_rational(const Rational& r);

double to_double(const Rational& r);

// Gaussian rational re + i·im.
struct QComplex {
  Rational re;
  Rational im;

  QComplex() = default;
  QComplex(Rational r) : re(std::move(r)) {}
  QComplex(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

  bool is_zero() const { return re == 0 && im == 0; }
  QComplex conj() const { return {re, -im}; }

  QComplex& operator+=(const QComplex& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  QComplex& operator-=(const QComplex& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  friend QComplex operator+(QComplex a, const QComplex& b) { return a += b; }
  friend QComplex operator-(QComplex a, const QComplex& b) { return a -= b; }
  friend QComplex operator-(const QComplex& a) { return {-a.re, -a.im}; }
  friend QComplex operator*(const QComplex& a, const QComplex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend bool operator==(const QComplex& a, const QComplex& b) {
    return a.re == b.re && a.im == b.im;
  }
};

inline const QComplex kI{Rational(0), Rational(1)};

std::string format_qcomplex(const QComplex& z);

// Dense exact matrix, row-major.
class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  RationalMatrix transpose() const;
  RationalMatrix operator*(const RationalMatrix& o) const;
  RationalMatrix operator-(const RationalMatrix& o) const;
  bool operator==(const RationalMatrix& o) const = default;
  bool is_zero() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

Rational determinant(RationalMatrix m);

// Basis of the right null space, one vector per free column of the RREF.
std::vector<std::vector<Rational>> null_space(const RationalMatrix& m);

// Indices of pivot columns of the RREF (a maximal independent column set).
std::vector<std::size_t> pivot_columns(const RationalMatrix& m);

// Exact positive-semidefiniteness test for a symmetric matrix, by symmetric
// elimination on positive diagonal pivots.
bool is_positive_semidefinite(RationalMatrix m);

}  // namespace chiral
