#include "chiral/heisenberg.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

namespace chiral::heisenberg {

namespace {

FockState apply_J_basis(int n, const Partition& p) {
  FockState out;
  if (n == 0) return out;
  if (n < 0) {
    Partition q = p;
    q.insert(std::upper_bound(q.begin(), q.end(), -n, std::greater<int>()), -n);
    out.add(q, Rational(1));
    return out;
  }
  const auto count = std::count(p.begin(), p.end(), n);
  if (count == 0) return out;
  Partition q = p;
  q.erase(std::find(q.begin(), q.end(), n));
  out.add(q, Rational(n) * Rational(count));
  return out;
}

Rational factorial(long long m) {
  Rational f(1);
  for (long long i = 2; i <= m; ++i) f *= i;
  return f;
}

}  // namespace

FockState apply_J(int n, const FockState& v) {
  FockState out;
  for (const auto& [p, x] : v.terms) out.add(apply_J_basis(n, p), x);
  return out;
}

Rational fock_norm(const Partition& p) {
  std::map<int, long long> mult;
  for (int x : p) ++mult[x];
  Rational r(1);
  for (const auto& [part, m] : mult) {
    Rational pw(1);
    for (long long i = 0; i < m; ++i) pw *= part;
    r *= pw * factorial(m);
  }
  return r;
}

Rational fock_inner(const FockState& u, const FockState& v) {
  Rational s(0);
  for (const auto& [p, x] : u.terms) {
    auto it = v.terms.find(p);
    if (it != v.terms.end()) s += x * it->second * fock_norm(p);
  }
  return s;
}

FockState apply_sugawara(int n, const FockState& v) {
  FockState out;
  int top = 0;
  for (const auto& [p, x] : v.terms) top = std::max(top, verma::level_of(p));
  const int span = top + std::abs(n) + 1;
  for (int k = -span; k <= span; ++k) {
    if (k + n >= -k) {
      out.add(apply_J(-k, apply_J(k + n, v)), Rational(1, 2));
    } else {
      out.add(apply_J(k + n, apply_J(-k, v)), Rational(1, 2));
    }
  }
  return out;
}

verma::ExactOperator sugawara_matrix(int n, int cutoff) {
  verma::ExactOperator op;
  op.mode = n;
  op.cutoff = cutoff;
  std::map<Partition, std::size_t> index;
  for (int k = 0; k <= cutoff; ++k)
    for (const auto& p : verma::partitions(k)) {
      index[p] = op.basis.size();
      op.basis.push_back(p);
    }
  op.matrix = RationalMatrix(op.basis.size(), op.basis.size());
  for (std::size_t j = 0; j < op.basis.size(); ++j) {
    const FockState img = apply_sugawara(n, FockState::basis(op.basis[j]));
    for (const auto& [p, x] : img.terms) {
      auto it = index.find(p);
      if (it != index.end()) op.matrix(it->second, j) = x;
    }
  }
  return op;
}

Report virasoro_check_c1(int max_level, int max_mode) {
  Report r("Sugawara c=1 Virasoro relations");
  long long failures = 0, checked = 0;
  std::string first;
  for (int n = -max_mode; n <= max_mode; ++n)
    for (int m = -max_mode; m <= max_mode; ++m) {
      const int top = max_level - std::abs(n) - std::abs(m);
      for (int k = 0; k <= top; ++k)
        for (const auto& p : verma::partitions(k)) {
          const FockState v = FockState::basis(p);
          FockState lhs = apply_sugawara(n, apply_sugawara(m, v)) - apply_sugawara(m, apply_sugawara(n, v));
          lhs.add(apply_sugawara(n + m, v), Rational(m - n));
          if (n + m == 0) lhs.add(v, -Rational(n * n * n - n, 12));
          ++checked;
          if (!lhs.is_zero()) {
            if (failures == 0)
              first = "n=" + std::to_string(n) + " m=" + std::to_string(m) + " on " + verma::format_partition(p);
            ++failures;
          }
        }
    }
  r.bound_check("failing basis vectors", 0.0, static_cast<double>(failures),
                std::to_string(checked) + " checked" + (first.empty() ? "" : ", first: " + first));
  return r;
}

Report hermiticity_check(int max_level, int max_mode) {
  Report r("Sugawara hermiticity");
  long long failures = 0;
  for (int n = -max_mode; n <= max_mode; ++n) {
    const int top = max_level - std::abs(n);
    for (int k = 0; k <= top; ++k)
      for (const auto& p : verma::partitions(k)) {
        const FockState img = apply_sugawara(n, FockState::basis(p));
        const int target = k - n;
        if (target < 0) {
          if (!img.is_zero()) ++failures;
          continue;
        }
        for (const auto& q : verma::partitions(target)) {
          const Rational lhs = fock_inner(FockState::basis(q), img);
          const Rational rhs = fock_inner(apply_sugawara(-n, FockState::basis(q)), FockState::basis(p));
          if (lhs != rhs) ++failures;
        }
      }
  }
  r.bound_check("asymmetric matrix elements", 0.0, static_cast<double>(failures));
  return r;
}

double Character::partial_trace(double beta) const {
  double s = 0.0;
  for (std::size_t k = 0; k < dims.size(); ++k) s += static_cast<double>(dims[k]) * std::exp(-beta * k);
  return s;
}

double Character::euler_partial(double beta) const {
  double prod = 1.0;
  for (std::size_t n = 1; n < dims.size(); ++n) prod /= 1.0 - std::exp(-beta * n);
  return prod;
}

double Character::tail_bound(double beta) const {
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
  // p(k) by the pentagonal recurrence in doubles, then p(k) < exp(π√(2k/3)) past the table
  const int n0 = static_cast<int>(dims.size()) - 1;
  const int table = std::max(n0 + 1, 4000);
  std::vector<double> p(static_cast<std::size_t>(table) + 1, 0.0);
  p[0] = 1.0;
  for (int k = 1; k <= table; ++k) {
    double s = 0.0;
    for (int j = 1;; ++j) {
      const int g1 = j * (3 * j - 1) / 2, g2 = j * (3 * j + 1) / 2;
      if (g1 > k) break;
      const double sign = (j % 2 == 1) ? 1.0 : -1.0;
      s += sign * p[k - g1];
      if (g2 <= k) s += sign * p[k - g2];
    }
    p[k] = s;
  }
  double tail = 0.0;
  for (int k = n0 + 1; k <= table; ++k) tail += p[k] * std::exp(-beta * k);
  const double kp = std::acos(-1.0) * std::sqrt(2.0 / 3.0);
  // exponents π√(2k/3) − βk are concave; bound the rest by a geometric series once decreasing
  double rest = 0.0;
  for (int k = table + 1; k < table + 100000; ++k) {
    const double term = std::exp(kp * std::sqrt(static_cast<double>(k)) - beta * k);
    rest += term;
    if (term < 1e-300) break;
  }
  return tail + rest;
}

Character character(int cutoff) {
  if (cutoff < 0) throw std::invalid_argument("cutoff must be nonnegative");
  Character c;
  for (int k = 0; k <= cutoff; ++k) c.dims.push_back(verma::partition_count(k));
  return c;
}

LevelModule fock_module(int cutoff, int max_mode) {
  std::vector<int> dims;
  for (int k = 0; k <= cutoff; ++k) dims.push_back(static_cast<int>(verma::partition_count(k)));
  LevelModule m("heisenberg", 1.0, 0.0, dims, max_mode);
  for (int n = 1; n <= max_mode; ++n) {
    for (int k = n; k <= cutoff; ++k) {
      const auto src = verma::partitions(k);
      const auto dst = verma::partitions(k - n);
      std::map<Partition, int> row;
      for (std::size_t i = 0; i < dst.size(); ++i) row[dst[i]] = static_cast<int>(i);
      Eigen::MatrixXd block = Eigen::MatrixXd::Zero(static_cast<int>(dst.size()), static_cast<int>(src.size()));
      for (std::size_t j = 0; j < src.size(); ++j) {
        const double nj = std::sqrt(to_double(fock_norm(src[j])));
        for (const auto& [p, x] : apply_sugawara(n, FockState::basis(src[j])).terms) {
          const int i = row.at(p);
          block(i, static_cast<int>(j)) = to_double(x) * std::sqrt(to_double(fock_norm(p))) / nj;
        }
      }
      m.set_lowering(n, k, std::move(block));
    }
  }
  return m;
}

}  // namespace chiral::heisenberg
