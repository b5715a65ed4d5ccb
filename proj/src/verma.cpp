#include "chiral/verma.hpp"

#include <algorithm>
#include <stdexcept>

namespace chiral::verma {

int level_of(const Partition& p) {
  int s = 0;
  for (int x : p) s += x;
  return s;
}

namespace {

void partitions_rec(int remaining, int max_part, Partition& cur, std::vector<Partition>& out) {
  if (remaining == 0) {
    out.push_back(cur);
    return;
  }
  for (int first = std::min(remaining, max_part); first >= 1; --first) {
    cur.push_back(first);
    partitions_rec(remaining - first, first, cur, out);
    cur.pop_back();
  }
}

Partition insert_part(const Partition& p, int part) {
  Partition r = p;
  r.insert(std::upper_bound(r.begin(), r.end(), part, std::greater<int>()), part);
  return r;
}

}  // namespace

std::vector<Partition> partitions(int n) {
  if (n < 0) throw std::invalid_argument("partitions of a negative integer");
  std::vector<Partition> out;
  Partition cur;
  partitions_rec(n, n, cur, out);
  return out;
}

long long partition_count(int n) {
  if (n < 0) return 0;
  std::vector<long long> p(static_cast<std::size_t>(n) + 1, 0);
  p[0] = 1;
  for (int part = 1; part <= n; ++part)
    for (int k = part; k <= n; ++k) p[k] += p[k - part];
  return p[n];
}

std::string format_partition(const Partition& p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(p[i]);
  }
  return s + ")";
}

VermaState VermaModule::apply_basis(int n, const Partition& p) const {
  const auto key = std::make_pair(n, p);
  {
    std::shared_lock lock(memo_mutex_);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
  }
  VermaState result = compute_basis(n, p);
  std::unique_lock lock(memo_mutex_);
  return memo_.emplace(key, std::move(result)).first->second;
}

VermaState VermaModule::compute_basis(int n, const Partition& p) const {
  VermaState out;
  if (n == 0) {
    out.add(p, params_.h + level_of(p));
    return out;
  }
  if (p.empty()) {
    if (n < 0) out.add(Partition{-n}, Rational(1));
    return out;
  }
  if (n < 0 && -n >= p.front()) {
    out.add(insert_part(p, -n), Rational(1));
    return out;
  }
  // L_n L_{−a} w = L_{−a} L_n w + (n+a) L_{n−a} w + δ_{n,a} c/12 (n³−n) w
  const int a = p.front();
  const Partition rest(p.begin() + 1, p.end());
  out = apply(-a, apply_basis(n, rest));
  if (n + a != 0) out.add(apply_basis(n - a, rest), Rational(n + a));
  if (n == a) {
    out.add(rest, params_.c * Rational(n * n * n - n, 12));
  }
  return out;
}

VermaState VermaModule::apply(int n, const VermaState& v) const {
  VermaState out;
  for (const auto& [p, x] : v.terms) out.add(apply_basis(n, p), x);
  return out;
}

ComplexVermaState VermaModule::apply(int n, const ComplexVermaState& v) const {
  ComplexVermaState out;
  for (const auto& [p, x] : v.terms) {
    for (const auto& [q, y] : apply_basis(n, p).terms) out.add(q, x * QComplex(y));
  }
  return out;
}

const GramMatrix& VermaModule::gram(int level) const {
  {
    std::lock_guard lock(gram_mutex_);
    auto it = grams_.find(level);
    if (it != grams_.end()) return it->second;
  }
  GramMatrix g;
  g.level = level;
  g.basis = partitions(level);
  const std::size_t d = g.basis.size();
  g.entries = RationalMatrix(d, d);
  if (level == 0) {
    g.entries(0, 0) = 1;
  } else {
    // ⟨L₋λ₁ rest, v⟩ = ⟨rest, L_{λ₁} v⟩
    for (std::size_t i = 0; i < d; ++i) {
      const Partition& lam = g.basis[i];
      const Partition rest(lam.begin() + 1, lam.end());
      const GramMatrix& lower = gram(level - lam.front());
      std::size_t rest_index =
          std::find(lower.basis.begin(), lower.basis.end(), rest) - lower.basis.begin();
      for (std::size_t j = i; j < d; ++j) {
        Rational s = 0;
        for (const auto& [nu, x] : apply_basis(lam.front(), g.basis[j]).terms) {
          std::size_t k = std::find(lower.basis.begin(), lower.basis.end(), nu) - lower.basis.begin();
          s += x * lower.entries(rest_index, k);
        }
        g.entries(i, j) = s;
        g.entries(j, i) = s;
      }
    }
  }
  std::lock_guard lock(gram_mutex_);
  return grams_.emplace(level, std::move(g)).first->second;
}

std::vector<Rational> coordinates(const VermaState& v, const std::vector<Partition>& basis) {
  std::vector<Rational> x(basis.size());
  for (const auto& [p, c] : v.terms) {
    auto it = std::find(basis.begin(), basis.end(), p);
    if (it == basis.end()) throw std::invalid_argument("state has a term outside the basis");
    x[static_cast<std::size_t>(it - basis.begin())] = c;
  }
  return x;
}

VermaState from_coordinates(const std::vector<Rational>& x, const std::vector<Partition>& basis) {
  VermaState v;
  for (std::size_t i = 0; i < x.size(); ++i) v.add(basis[i], x[i]);
  return v;
}

Rational VermaModule::inner(const VermaState& u, const VermaState& v) const {
  std::map<int, VermaState> ul, vl;
  for (const auto& [p, x] : u.terms) ul[level_of(p)].add(p, x);
  for (const auto& [p, x] : v.terms) vl[level_of(p)].add(p, x);
  Rational s = 0;
  for (const auto& [k, uk] : ul) {
    auto it = vl.find(k);
    if (it == vl.end()) continue;
    const GramMatrix& g = gram(k);
    auto a = coordinates(uk, g.basis);
    auto b = coordinates(it->second, g.basis);
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] == 0) continue;
      for (std::size_t j = 0; j < b.size(); ++j) s += a[i] * g.entries(i, j) * b[j];
    }
  }
  return s;
}

VermaState apply_L(int n, const VermaState& v, const VirasoroParams& params) {
  return VermaModule(params).apply(n, v);
}

GramMatrix gram_matrix(const VirasoroParams& params, int level) {
  if (level < 0) throw std::invalid_argument("negative level");
  return VermaModule(params).gram(level);
}

namespace {

bool is_null(const VermaModule& mod, const VermaState& v) {
  if (v.is_zero()) return true;
  auto lvl = v.level();
  if (!lvl) throw std::logic_error("null test of a mixed-level state");
  const GramMatrix& g = mod.gram(*lvl);
  auto x = coordinates(v, g.basis);
  for (std::size_t i = 0; i < x.size(); ++i) {
    Rational s = 0;
    for (std::size_t j = 0; j < x.size(); ++j) s += g.entries(i, j) * x[j];
    if (s != 0) return false;
  }
  return true;
}

}  // namespace

KernelResult gram_kernel(const VirasoroParams& params, int level) {
  VermaModule mod(params);
  const GramMatrix& g = mod.gram(level);
  KernelResult r;
  r.det = determinant(g.entries);
  for (auto& x : null_space(g.entries)) {
    VermaState v = from_coordinates(x, g.basis);
    for (int n : {1, 2}) {
      if (n > level) continue;
      VermaState w = mod.apply(n, v);
      if (!w.is_zero()) r.annihilated_exactly = false;
      if (!is_null(mod, w)) r.raising_maps_into_radical = false;
    }
    r.singular_vectors.push_back(std::move(v));
  }
  return r;
}

Rational minimal_charge(int m) { return Rational(1) - Rational(6, (m + 2) * (m + 3)); }

Rational minimal_weight(int m, int p, int q) {
  const long long d = static_cast<long long>(m + 3) * p - static_cast<long long>(m + 2) * q;
  return Rational(d * d - 1, 4LL * (m + 2) * (m + 3));
}

std::string kind_name(Classification::Kind k) {
  switch (k) {
    case Classification::Kind::continuum: return "continuum";
    case Classification::Kind::discrete: return "discrete";
    case Classification::Kind::trivial: return "trivial";
    case Classification::Kind::non_unitary: return "non_unitary";
  }
  return "unknown";
}

namespace {

// m ≥ 1 with c = c(m), if any.
std::optional<int> minimal_series_index(const Rational& c) {
  if (c >= 1) return std::nullopt;
  const Rational x = Rational(6) / (Rational(1) - c);
  if (denominator(x) != 1) return std::nullopt;
  using boost::multiprecision::mpz_int;
  const mpz_int disc = 1 + 4 * numerator(x);
  const mpz_int root = sqrt(disc);
  if (root * root != disc) return std::nullopt;
  const mpz_int twice_m = root - 5;
  if (twice_m < 2 || twice_m % 2 != 0) return std::nullopt;
  return static_cast<int>(twice_m / 2);
}

}  // namespace

Classification classify_unitarity(const VirasoroParams& params, int witness_depth) {
  using Kind = Classification::Kind;
  const Rational& c = params.c;
  const Rational& h = params.h;
  if (c >= 1 && h >= 0) return {Kind::continuum};
  if (c == 0 && h == 0) return {Kind::trivial};
  if (auto m = minimal_series_index(c)) {
    for (int p = 1; p <= *m + 1; ++p)
      for (int q = 1; q <= p; ++q)
        if (minimal_weight(*m, p, q) == h) return {Kind::discrete, *m, p, q};
  }
  Classification out{Kind::non_unitary};
  VermaModule mod(params);
  for (int k = 1; k <= witness_depth; ++k) {
    if (!is_positive_semidefinite(mod.gram(k).entries)) {
      out.witness_level = k;
      break;
    }
  }
  return out;
}

ExactOperator operator_matrix(int n, const VirasoroParams& params, int cutoff) {
  if (cutoff < 0) throw std::invalid_argument("negative cutoff");
  ExactOperator op;
  op.mode = n;
  op.cutoff = cutoff;
  std::map<Partition, std::size_t> index;
  for (int k = 0; k <= cutoff; ++k)
    for (auto& p : partitions(k)) {
      index[p] = op.basis.size();
      op.basis.push_back(p);
    }
  op.matrix = RationalMatrix(op.basis.size(), op.basis.size());
  VermaModule mod(params);
  for (std::size_t j = 0; j < op.basis.size(); ++j) {
    const int target = level_of(op.basis[j]) - n;
    if (target < 0 || target > cutoff) continue;
    for (const auto& [p, x] : mod.apply_basis(n, op.basis[j]).terms) op.matrix(index.at(p), j) = x;
  }
  return op;
}

Report virasoro_relations_check(const VirasoroParams& params, int max_mode, int max_level) {
  Report rep;
  rep.title = "virasoro relations c=" + format_rational(params.c) + " h=" + format_rational(params.h);
  VermaModule mod(params);
  long long tested = 0, failures = 0;
  for (int n = -max_mode; n <= max_mode; ++n)
    for (int m = -max_mode; m <= max_mode; ++m) {
      const int top = max_level - std::abs(n) - std::abs(m);
      for (int k = 0; k <= top; ++k)
        for (const auto& p : partitions(k)) {
          const VermaState v = VermaState::basis(p);
          VermaState lhs = mod.apply(n, mod.apply(m, v)) - mod.apply(m, mod.apply(n, v));
          lhs.add(mod.apply(n + m, v), Rational(-(n - m)));
          if (n + m == 0) lhs.add(v, -params.c * Rational(n * n * n - n, 12));
          ++tested;
          if (!lhs.is_zero()) ++failures;
        }
    }
  rep.bound_check("relation residuals", 0.0, static_cast<double>(failures),
                  std::to_string(tested) + " (n,m,basis) cases");
  return rep;
}

VacuumIdentityResult vacuum_identity_check(const Rational& c, int max_n) {
  VacuumIdentityResult out;
  out.report.title = "vacuum identities c=" + format_rational(c);
  VermaModule mod({c, Rational(0)});
  const VermaState omega = VermaState::vacuum();
  for (int n = 2; n <= max_n; ++n) {
    VacuumIdentityEntry e;
    e.n = n;
    e.lhs = mod.apply(2, mod.apply(-n, omega)) - mod.apply(-n, mod.apply(2, omega));
    if (n == 2) {
      e.rhs = (c / 2) * omega;
    } else {
      e.rhs = Rational(2 + n) * mod.apply(-n + 2, omega);
    }
    e.equal = e.lhs == e.rhs;
    e.rhs_null = is_null(mod, e.rhs);
    out.report.exact_check("[L2,L-" + std::to_string(n) + "]Omega", e.equal,
                           e.rhs_null ? "both sides null in the quotient" : "");
    out.entries.push_back(std::move(e));
  }
  return out;
}

}  // namespace chiral::verma
