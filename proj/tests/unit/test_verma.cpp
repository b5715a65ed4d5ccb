#include <random>
#include <thread>

#include "chiral/verma.hpp"
#include "doctest.h"

using namespace chiral;
using namespace chiral::verma;

namespace {

Rational Q(long long p, long long q = 1) { return Rational(p, q); }

// Partition counts from Euler's pentagonal recurrence.
long long pentagonal_count(int n) {
  std::vector<long long> p(n + 1, 0);
  p[0] = 1;
  for (int k = 1; k <= n; ++k) {
    long long s = 0;
    for (int j = 1;; ++j) {
      int g1 = j * (3 * j - 1) / 2, g2 = j * (3 * j + 1) / 2;
      if (g1 > k) break;
      long long sign = (j % 2) ? 1 : -1;
      s += sign * p[k - g1];
      if (g2 <= k) s += sign * p[k - g2];
    }
    p[k] = s;
  }
  return p[n];
}

}  // namespace

TEST_CASE("partitions") {
  CHECK(partitions(0).size() == 1);
  CHECK(partitions(0)[0].empty());
  CHECK(partitions(4).size() == 5);
  CHECK(partitions(5).size() == 7);
  CHECK(partitions(4) == std::vector<Partition>{{4}, {3, 1}, {2, 2}, {2, 1, 1}, {1, 1, 1, 1}});
  for (int n = 0; n <= 20; ++n) {
    CHECK(static_cast<long long>(partitions(n).size()) == pentagonal_count(n));
    CHECK(partition_count(n) == pentagonal_count(n));
  }
}

TEST_CASE("apply_L basics") {
  VirasoroParams prm{Q(1, 2), Q(1, 16)};
  auto omega = VermaState::vacuum();
  auto v = apply_L(-1, omega, prm);
  CHECK(apply_L(1, v, prm) == Q(1, 8) * omega);
  for (int n = 1; n <= 5; ++n) CHECK(apply_L(n, omega, prm).is_zero());
  for (int k = 0; k <= 5; ++k)
    for (auto& p : partitions(k)) {
      auto b = VermaState::basis(p);
      CHECK(apply_L(0, b, prm) == (prm.h + k) * b);
    }
  // L₋₁ applied to L₋₂Φ reorders to L₋₂L₋₁Φ + L₋₃Φ
  auto w = apply_L(-1, VermaState::basis({2}), prm);
  VermaState expect;
  expect.add(Partition{2, 1}, Q(1));
  expect.add(Partition{3}, Q(1));
  CHECK(w == expect);
}

TEST_CASE("gram matrices follow the closed forms") {
  std::vector<VirasoroParams> cases{{Q(1, 2), Q(1, 16)}, {Q(3), Q(2, 7)}, {Q(-2, 5), Q(1, 3)}, {Q(26, 10), Q(3, 7)}, {Q(0), Q(0)}};
  for (const auto& [c, h] : cases) {
    auto g1 = gram_matrix({c, h}, 1);
    CHECK(g1.entries(0, 0) == 2 * h);
    auto g2 = gram_matrix({c, h}, 2);
    CHECK(g2.basis == std::vector<Partition>{{2}, {1, 1}});
    CHECK(g2.entries(0, 0) == 4 * h + c / 2);
    CHECK(g2.entries(1, 1) == 4 * h * (2 * h + 1));
    CHECK(g2.entries(0, 1) == 6 * h);
    CHECK(g2.entries(1, 0) == 6 * h);
    CHECK(determinant(g2.entries) == 2 * (16 * h * h * h - 10 * h * h + 2 * h * h * c + h * c));
    VermaModule mod({c, h});
    for (int n = 1; n <= 6; ++n) {
      auto v = mod.apply(-n, VermaState::vacuum());
      CHECK(mod.inner(v, v) == 2 * n * h + c / 12 * Rational(n * n * n - n));
    }
    for (int k = 0; k <= 5; ++k) {
      auto g = gram_matrix({c, h}, k);
      CHECK(g.entries == g.entries.transpose());
    }
  }
  CHECK(gram_matrix({Q(7), Q(0)}, 2).entries(0, 0) == Q(7, 2));
}

TEST_CASE("gram agrees with direct reduction of the raising word") {
  VirasoroParams prm{Q(7, 3), Q(2, 5)};
  VermaModule mod(prm);
  for (int k = 1; k <= 5; ++k) {
    auto g = mod.gram(k);
    for (std::size_t i = 0; i < g.basis.size(); ++i)
      for (std::size_t j = 0; j < g.basis.size(); ++j) {
        VermaState v = VermaState::basis(g.basis[j]);
        // adjoint of L₋λ₁..L₋λₖ is L_λₖ..L_λ₁ : apply L_λ₁ first
        for (int part : g.basis[i]) v = mod.apply(part, v);
        Rational coeff = v.terms.count({}) ? v.terms.at({}) : Rational(0);
        CHECK(coeff == g.entries(i, j));
      }
  }
}

TEST_CASE("gram kernels") {
  auto r = gram_kernel({Q(1, 2), Q(1, 16)}, 2);
  CHECK(r.det == 0);
  REQUIRE(r.singular_vectors.size() == 1);
  CHECK(r.annihilated_exactly);
  CHECK(r.raising_maps_into_radical);
  auto r0 = gram_kernel({Q(0), Q(0)}, 1);
  REQUIRE(r0.singular_vectors.size() == 1);
  CHECK(r0.singular_vectors[0].terms.count({1}) == 1);
  auto gen = gram_kernel({Q(3), Q(2, 7)}, 2);
  CHECK(gen.det != 0);
  CHECK(gen.singular_vectors.empty());
  // h = 0: L₋₁²Ω is in the radical without being annihilated by L₁
  auto vac = gram_kernel({Q(1, 2), Q(0)}, 2);
  CHECK_FALSE(vac.annihilated_exactly);
  CHECK(vac.raising_maps_into_radical);
}

TEST_CASE("minimal series values") {
  CHECK(minimal_charge(1) == Q(1, 2));
  CHECK(minimal_charge(2) == Q(7, 10));
  CHECK(minimal_weight(1, 2, 2) == Q(1, 16));
  CHECK(minimal_weight(1, 2, 1) == Q(1, 2));
  CHECK(minimal_weight(1, 1, 1) == 0);
}

TEST_CASE("classification") {
  auto d = classify_unitarity({Q(1, 2), Q(1, 16)});
  CHECK(d.kind == Classification::Kind::discrete);
  CHECK(d.m == 1);
  CHECK(d.p == 2);
  CHECK(d.q == 2);
  CHECK(classify_unitarity({Q(2), Q(37, 10)}).kind == Classification::Kind::continuum);
  CHECK(classify_unitarity({Q(0), Q(0)}).kind == Classification::Kind::trivial);
  auto bad = classify_unitarity({Q(2), Q(-1, 3)});
  CHECK(bad.kind == Classification::Kind::non_unitary);
  CHECK(bad.witness_level == 1);
  auto small = classify_unitarity({Q(2, 5), Q(0)}, 6);
  CHECK(small.kind == Classification::Kind::non_unitary);
  CHECK(small.witness_level == 6);
  auto shallow = classify_unitarity({Q(2, 5), Q(0)}, 4);
  CHECK_FALSE(shallow.witness_level.has_value());
  auto neg = classify_unitarity({Q(1, 2), Q(1, 5)}, 4);
  CHECK(neg.kind == Classification::Kind::non_unitary);
  CHECK(neg.witness_level.has_value());
}

TEST_CASE("psd test") {
  RationalMatrix m(2, 2);
  m(0, 0) = 1; m(0, 1) = 1; m(1, 0) = 1; m(1, 1) = 1;
  CHECK(is_positive_semidefinite(m));
  m(1, 1) = Q(1, 2);
  CHECK_FALSE(is_positive_semidefinite(m));
  RationalMatrix z(2, 2);
  z(0, 1) = 1; z(1, 0) = 1;
  CHECK_FALSE(is_positive_semidefinite(z));
}

TEST_CASE("operator matrices") {
  VirasoroParams prm{Q(26, 10), Q(3, 7)};
  auto l0 = operator_matrix(0, prm, 4);
  for (std::size_t i = 0; i < l0.basis.size(); ++i)
    for (std::size_t j = 0; j < l0.basis.size(); ++j)
      CHECK(l0.matrix(i, j) == (i == j ? prm.h + level_of(l0.basis[i]) : Rational(0)));
  // ⟨u, L_n v⟩ = ⟨L₋ₙ u, v⟩ in the Shapovalov form
  VermaModule mod(prm);
  for (int n : {1, 2, 3}) {
    auto up = operator_matrix(-n, prm, 5);
    auto dn = operator_matrix(n, prm, 5);
    for (std::size_t i = 0; i < up.basis.size(); ++i)
      for (std::size_t j = 0; j < up.basis.size(); ++j) {
        if (level_of(up.basis[i]) + n != level_of(up.basis[j])) continue;
        VermaState u = VermaState::basis(up.basis[i]);
        VermaState v = VermaState::basis(up.basis[j]);
        CHECK(mod.inner(u, mod.apply(n, v)) == mod.inner(mod.apply(-n, u), v));
      }
    (void)dn;
  }
  auto lm1 = operator_matrix(-1, prm, 3);
  VermaState img;
  for (std::size_t i = 0; i < lm1.basis.size(); ++i) img.add(lm1.basis[i], lm1.matrix(i, 0));
  CHECK(mod.inner(img, img) == 2 * prm.h);
}

TEST_CASE("virasoro relations small") {
  auto rep = virasoro_relations_check({Q(1, 2), Q(1, 16)}, 3, 7);
  CHECK(rep.passed());
}

TEST_CASE("vacuum identities") {
  for (Rational c : {Q(1, 2), Q(1), Q(2)}) {
    auto res = vacuum_identity_check(c, 8);
    CHECK(res.report.passed());
    CHECK(res.entries[0].lhs == (c / 2) * VermaState::vacuum());
    CHECK(res.entries[1].n == 3);
    CHECK(res.entries[1].rhs_null);
    CHECK_FALSE(res.entries[2].rhs_null);
  }
}

TEST_CASE("memo is shareable across threads") {
  VermaModule mod({Q(1, 2), Q(1, 16)});
  std::vector<std::thread> pool;
  std::vector<Rational> got(4);
  for (int t = 0; t < 4; ++t)
    pool.emplace_back([&, t] {
      auto v = mod.apply(-3, mod.apply(-2, VermaState::vacuum()));
      got[t] = mod.inner(v, v);
    });
  for (auto& th : pool) th.join();
  for (int t = 1; t < 4; ++t) CHECK(got[t] == got[0]);
}
