#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <utility>
#include <vector>

#include "chiral/rational.hpp"
#include "chiral/report.hpp"

namespace chiral::verma {

// Weakly decreasing positive parts; (3,1,1) labels L₋₃L₋₁L₋₁Φ.
using Partition = std::vector<int>;

int level_of(const Partition& p);
// All partitions of n, largest first part first: (4), (3,1), (2,2), (2,1,1), (1,1,1,1).
std::vector<Partition> partitions(int n);
long long partition_count(int n);
std::string format_partition(const Partition& p);

struct VirasoroParams {
  Rational c;
  Rational h;
};

template <class Coeff>
struct BasicState {
  std::map<Partition, Coeff> terms;

  void add(const Partition& p, const Coeff& x) {
    if (x == Coeff{}) return;
    auto [it, inserted] = terms.emplace(p, x);
    if (!inserted) {
      it->second += x;
      if (it->second == Coeff{}) terms.erase(it);
    }
  }
  void add(const BasicState& o, const Coeff& scale) {
    for (const auto& [p, x] : o.terms) add(p, x * scale);
  }
  bool is_zero() const { return terms.empty(); }
  // nullopt for mixed-level states.
  std::optional<int> level() const {
    std::optional<int> l;
    for (const auto& [p, x] : terms) {
      int k = level_of(p);
      if (l && *l != k) return std::nullopt;
      l = k;
    }
    return l ? l : std::optional<int>(0);
  }
  friend BasicState operator+(BasicState a, const BasicState& b) {
    a.add(b, Coeff(Rational(1)));
    return a;
  }
  friend BasicState operator-(BasicState a, const BasicState& b) {
    a.add(b, Coeff(Rational(-1)));
    return a;
  }
  friend BasicState operator*(const Coeff& s, const BasicState& a) {
    BasicState r;
    r.add(a, s);
    return r;
  }
  friend bool operator==(const BasicState& a, const BasicState& b) { return a.terms == b.terms; }

  static BasicState basis(const Partition& p) {
    BasicState s;
    s.add(p, Coeff(Rational(1)));
    return s;
  }
  static BasicState vacuum() { return basis({}); }
};

using VermaState = BasicState<Rational>;
using ComplexVermaState = BasicState<QComplex>;

struct GramMatrix {
  int level = 0;
  std::vector<Partition> basis;
  RationalMatrix entries;
};

// Verma module of given (c,h) with a shared, thread-safe memo of L_n on basis vectors.
class VermaModule {
 public:
  explicit VermaModule(VirasoroParams params) : params_(std::move(params)) {}

  const VirasoroParams& params() const { return params_; }
  VermaState apply(int n, const VermaState& v) const;
  ComplexVermaState apply(int n, const ComplexVermaState& v) const;
  VermaState apply_basis(int n, const Partition& p) const;
  const GramMatrix& gram(int level) const;
  // Shapovalov pairing; mixed-level states pair level by level.
  Rational inner(const VermaState& u, const VermaState& v) const;

 private:
  VermaState compute_basis(int n, const Partition& p) const;

  VirasoroParams params_;
  mutable std::shared_mutex memo_mutex_;
  mutable std::map<std::pair<int, Partition>, VermaState> memo_;
  mutable std::mutex gram_mutex_;
  mutable std::map<int, GramMatrix> grams_;
};

VermaState apply_L(int n, const VermaState& v, const VirasoroParams& params);
GramMatrix gram_matrix(const VirasoroParams& params, int level);

std::vector<Rational> coordinates(const VermaState& v, const std::vector<Partition>& basis);
VermaState from_coordinates(const std::vector<Rational>& x, const std::vector<Partition>& basis);

struct KernelResult {
  Rational det;
  std::vector<VermaState> singular_vectors;
  // L₁v and L₂v are null (Gram-orthogonal to everything) for every kernel vector v.
  bool raising_maps_into_radical = true;
  // L₁v = L₂v = 0 already in the Verma module.
  bool annihilated_exactly = true;
};
KernelResult gram_kernel(const VirasoroParams& params, int level);

// c(m) = 1 − 6/((m+2)(m+3))
Rational minimal_charge(int m);
// h_{p,q}(m) = (((m+3)p − (m+2)q)² − 1)/(4(m+2)(m+3))
Rational minimal_weight(int m, int p, int q);

struct Classification {
  enum class Kind { continuum, discrete, trivial, non_unitary } kind;
  int m = 0, p = 0, q = 0;
  std::optional<int> witness_level = std::nullopt;
};
std::string kind_name(Classification::Kind k);
Classification classify_unitarity(const VirasoroParams& params, int witness_depth = 6);

struct ExactOperator {
  int mode = 0;
  int cutoff = 0;
  std::vector<Partition> basis;  // levels 0..cutoff, each in partitions() order
  RationalMatrix matrix;         // column = source basis vector
};
ExactOperator operator_matrix(int n, const VirasoroParams& params, int cutoff);

// Checks ([L_n,L_m] − (n−m)L_{n+m} − c/12(n³−n)δ)v = 0 on every basis vector of
// level ≤ max_level − |n| − |m|, for all |n|,|m| ≤ max_mode.
Report virasoro_relations_check(const VirasoroParams& params, int max_mode, int max_level);

struct VacuumIdentityEntry {
  int n;
  VermaState lhs;  // [L₂, L₋ₙ]Ω
  VermaState rhs;  // (2+n)L₋ₙ₊₂Ω, or (c/2)Ω for n = 2
  bool equal;
  bool rhs_null;   // zero in the irreducible quotient
};
struct VacuumIdentityResult {
  std::vector<VacuumIdentityEntry> entries;
  Report report;
};
VacuumIdentityResult vacuum_identity_check(const Rational& c, int max_n);

}  // namespace chiral::verma
