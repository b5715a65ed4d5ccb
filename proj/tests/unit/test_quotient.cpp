#include <Eigen/Eigenvalues>

#include "chiral/quotient.hpp"
#include "doctest.h"

using namespace chiral;
using namespace chiral::verma;

namespace {

Rational Q(long long p, long long q = 1) { return Rational(p, q); }

// Per-level spectrum of L₋₁L₁ + L₋₂L₂, invariant under orthogonal changes of basis.
std::vector<double> level_spectrum(const LevelModule& m, int k) {
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(m.dim(k), m.dim(k));
  for (int n : {1, 2})
    if (k >= n) s += m.lowering(n, k).transpose() * m.lowering(n, k);
  auto es = symmetric_eigen(s, false);
  return std::vector<double>(es.values.data(), es.values.data() + es.values.size());
}

}  // namespace

TEST_CASE("quotient dimensions") {
  auto ising = build_exact_quotient({Q(1, 2), Q(1, 16)}, 6);
  CHECK(ising.module.dim(2) == 1);
  CHECK(ising.verma_dims[2] == 2);
  auto vac = quotient_module({Q(1), Q(0)}, 5);
  CHECK(vac.dim(1) == 0);
  auto generic = quotient_module({Q(3), Q(2, 7)}, 7);
  for (int k = 0; k <= 7; ++k) CHECK(generic.dim(k) == partition_count(k));
  // Ising vacuum character 1 + q² + q³ + 2q⁴ + 2q⁵ + 3q⁶ + 3q⁷ + 5q⁸
  auto isv = quotient_module({Q(1, 2), Q(0)}, 8);
  CHECK(isv.dims() == std::vector<int>{1, 0, 1, 1, 2, 2, 3, 3, 5});
  CHECK_THROWS_AS(quotient_module({Q(2, 5), Q(0)}, 3), std::domain_error);
}

TEST_CASE("exact quotient is hermitian and satisfies the relations") {
  for (auto prm : {VirasoroParams{Q(1, 2), Q(1, 16)}, VirasoroParams{Q(26, 10), Q(3, 7)}}) {
    auto q = build_exact_quotient(prm, 7);
    CHECK(q.hermiticity_defect < 1e-10);
    CHECK(virasoro_residual(q.module, 3) < 1e-9);
  }
}

TEST_CASE("recursive builder matches the exact route") {
  for (auto prm : {VirasoroParams{Q(1, 2), Q(0)}, VirasoroParams{Q(1, 2), Q(1, 16)}, VirasoroParams{Q(1), Q(0)},
                   VirasoroParams{Q(7, 10), Q(3, 5)}, VirasoroParams{Q(26, 10), Q(3, 7)}}) {
    auto ex = quotient_module(prm, 8);
    auto rc = quotient_module_recursive(prm, 8);
    CHECK(ex.dims() == rc.dims());
    for (int k = 0; k <= 8; ++k) {
      auto a = level_spectrum(ex, k), b = level_spectrum(rc, k);
      REQUIRE(a.size() == b.size());
      for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-9));
    }
    // spectrum of a mode-mixing operator L₀ + L₃ + L₋₃ + L₂ + L₋₂
    auto mix = [](const LevelModule& m) {
      Eigen::MatrixXd t = m.mode(0) + m.mode(3) + m.mode(-3) + m.mode(2) + m.mode(-2);
      return symmetric_eigen(t, false).values;
    };
    CHECK((mix(ex) - mix(rc)).cwiseAbs().maxCoeff() < 1e-8);
    CHECK(virasoro_residual(rc, 4) < 1e-8);
  }
}

TEST_CASE("recursive builder scales") {
  auto m = quotient_module_recursive({Q(1, 2), Q(0)}, 20);
  CHECK(m.dim(20) > 0);
  CHECK(virasoro_residual(m, 2) < 1e-7);
}
