#include <cmath>

#include "chiral/heisenberg.hpp"
#include "chiral/quotient.hpp"
#include "chiral/sl2rep.hpp"
#include "chiral/smeared.hpp"
#include "doctest.h"

using namespace chiral;
using namespace chiral::smeared;

namespace {

verma::VirasoroParams params(Rational c, Rational h) { return {c, h}; }

FourierFunction t_function() {
  FourierFunction f(1);
  f.set_real_pair(0, 0.5);
  f.set_real_pair(1, -0.25);
  return f;
}

}  // namespace

TEST_CASE("smear of constants and the t field") {
  const LevelModule mod = verma::quotient_module_auto(params(Rational(1, 2), Rational(1, 16)), 8);
  FourierFunction one(0);
  one.set_coeff(0, 1.0);
  const TruncatedOperator op = smear(one, mod);
  CHECK((op.matrix - mod.mode(0).cast<Complex>()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(op.safe_level == 8);

  const sl2::LowestWeightSL2 rep(0.75, 20);
  const TruncatedOperator t = smear(t_function(), rep.as_level_module());
  const auto gens = sl2::generators_htd(rep);
  CHECK((t.matrix - gens.t.cast<Complex>()).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(t.safe_level == 19);
}

TEST_CASE("real functions give symmetric operators") {
  const LevelModule mod = verma::quotient_module_auto(params(Rational(7, 10), Rational(3, 5)), 8);
  for (const auto& f : random_test_functions(5, 4, 11)) {
    const Eigen::MatrixXcd m = smear(f, mod).matrix;
    CHECK((m - m.adjoint()).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("dropped modes are reported") {
  const sl2::LowestWeightSL2 rep(1.0, 6);
  FourierFunction f(2);
  f.set_real_pair(2, 1.0);
  CHECK_FALSE(smear(f, rep.as_level_module()).warnings.empty());
}

TEST_CASE("energy bound on a lowest weight vector") {
  // ‖L₋₂Φ‖² = 4h + c/2 against the single-mode bound
  const double c = 0.5, h = 1.0 / 16;
  const LevelModule mod = verma::quotient_module_auto(params(Rational(1, 2), Rational(1, 16)), 4);
  Eigen::VectorXd phi = Eigen::VectorXd::Zero(mod.total_dim());
  phi(0) = 1.0;
  const double lhs = (mod.mode(-2) * phi).norm();
  CHECK(lhs == doctest::Approx(std::sqrt(4 * h + c / 2)));
  CHECK(lhs <= std::sqrt(1 + c / 12) * (1 + std::pow(2.0, 1.5)) * (1 + h));

  const auto fs = random_test_functions(6, 3, 5);
  CHECK(energy_bound_verify(mod, fs, 20, 1).passed());
  CHECK(energy_bound_verify(heisenberg::fock_module(8, 6), fs, 20, 2).passed());
  CHECK(energy_bound_verify(sl2::LowestWeightSL2(0.5, 20).as_level_module(), random_test_functions(4, 1, 3), 20, 3)
            .passed());
}

TEST_CASE("commutator with the energy semigroup") {
  CHECK(commutator_level_factor(0.5, 3, 2, 0.1) == doctest::Approx(std::exp(-0.35) - std::exp(-0.15)));
  CHECK(commutator_level_factor(0.5, 3, 0, 0.1) == 0.0);
  const auto grid = log_grid(1e-3, 1e3, 2);
  REQUIRE(grid.size() == 13);
  CHECK(grid.front() == doctest::Approx(1e-3));
  CHECK(grid.back() == doctest::Approx(1e3));
  const LevelModule mod = verma::quotient_module_auto(params(Rational(1), Rational(0)), 10);
  CHECK(commutator_norm_bound(mod, 4, grid, 10, 4).passed());
  CHECK_THROWS(log_grid(0.0, 1.0, 2));
}

TEST_CASE("linearity and continuity") {
  const LevelModule mod = verma::quotient_module_auto(params(Rational(1, 2), Rational(1, 2)), 8);
  const auto fs = random_test_functions(2, 3, 9);
  CHECK(linearity_check(fs[0], fs[1], -1.7, mod).passed());
  std::vector<FourierFunction> approx;
  for (double s : {0.5, 0.25, 0.125}) approx.push_back(fs[0] + fs[1] * s);
  const Report r = continuity_check(fs[0], approx, mod);
  CHECK(r.passed());
  CHECK(r.warnings.empty());
}

TEST_CASE("central pairing and wronskian") {
  ExactTrig e2, em2;
  e2[2] = QComplex(Rational(1));
  em2[-2] = QComplex(Rational(1));
  // L_n modes: (g,f) for f = e_n, g = e_{-n} is −i n(1 − n²)
  const QComplex p = central_pairing(em2, e2);
  CHECK(p.re == Rational(0));
  CHECK(p.im == Rational(6));
  const ExactTrig w = wronskian(em2, e2);
  REQUIRE(w.size() == 1);
  CHECK(w.at(0).im == Rational(4));
}

TEST_CASE("TT commutator") {
  const auto c = params(Rational(1, 2), Rational(1, 16));
  for (int n = -3; n <= 3; ++n)
    for (int m = -3; m <= 3; ++m) {
      ExactTrig f, g;
      f[n] = QComplex(Rational(1));
      g[m] = QComplex(Rational(1));
      CHECK(tt_commutator_check(f, g, c, 3).passed());
    }
  ExactTrig f, g;
  f[0] = QComplex(Rational(1, 3));
  f[1] = QComplex(Rational(2), Rational(-1));
  f[-1] = QComplex(Rational(2), Rational(1));
  f[3] = QComplex(Rational(0), Rational(1, 5));
  f[-3] = QComplex(Rational(0), Rational(1, 5));
  g[2] = QComplex(Rational(-1, 2), Rational(3));
  g[-2] = QComplex(Rational(-1, 2), Rational(-3));
  g[1] = QComplex(Rational(1, 7));
  g[-1] = QComplex(Rational(1, 7));
  CHECK(tt_commutator_check(f, g, params(Rational(26, 10), Rational(1, 3)), 4).passed());
}

TEST_CASE("t2 split") {
  const ExactTrig t2 = t_field(2);
  CHECK(t2.at(0).re == Rational(1, 4));
  CHECK(t2.at(2).re == Rational(-1, 8));
  CHECK(t2.at(-2).re == Rational(-1, 8));
  const PiRational p0 = t2_plus_coeff(0);
  CHECK(p0.rational.re == Rational(1, 8));
  CHECK(p0.over_pi.is_zero());
  CHECK(t2_plus_coeff(3).over_pi.im == Rational(1, 15));
  CHECK(t2_minus_coeff(3).over_pi.im == Rational(-1, 15));
  CHECK(t2_plus_function().c1_defect() < 1e-15);
  T2SplitOptions opts;
  opts.cauchy_step = 0;
  const Report r = t2_split(params(Rational(1, 2), Rational(0)), 24, opts);
  for (const auto& ch : r.checks) {
    INFO(ch.name, " ", ch.observed, " ", ch.bound);
    CHECK(ch.passed);
  }
}
