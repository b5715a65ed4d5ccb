#include "chiral/smeared.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "chiral/quotient.hpp"

namespace chiral::smeared {

using mobius::kPi;

int degree(const FourierFunction& f) {
  for (int n = f.cutoff(); n > 0; --n)
    if (f.coeff(n) != 0.0 || f.coeff(-n) != 0.0) return n;
  return 0;
}

TruncatedOperator smear(const FourierFunction& f, const LevelModule& module) {
  TruncatedOperator op;
  op.module_tag = module.tag();
  op.cutoff = module.cutoff();
  op.safe_level = std::max(0, module.cutoff() - std::min(degree(f), module.cutoff()));
  const int dim = module.total_dim();
  Eigen::MatrixXd re = Eigen::MatrixXd::Zero(dim, dim), im = Eigen::MatrixXd::Zero(dim, dim);
  const int top = std::min(f.cutoff(), module.cutoff());
  bool dropped = false;
  for (int n = -top; n <= top; ++n) {
    const Complex a = f.coeff(n);
    if (a == 0.0) continue;
    if (std::abs(n) > module.max_mode()) {
      dropped = true;
      continue;
    }
    module.accumulate_mode(n, a.real(), re);
    module.accumulate_mode(n, a.imag(), im);
  }
  op.matrix = re.cast<Complex>() + Complex(0.0, 1.0) * im.cast<Complex>();
  if (dropped) op.warnings.push_back("modes beyond " + std::to_string(module.max_mode()) + " are not available in " +
                                     module.tag() + " and were dropped");
  if (!f.decay_constant() && f.cutoff() > module.cutoff())
    op.warnings.push_back("coefficients beyond the cutoff are dropped and no decay certificate is attached");
  return op;
}

std::vector<FourierFunction> random_test_functions(int count, int max_degree, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::vector<FourierFunction> out;
  for (int i = 0; i < count; ++i) {
    FourierFunction f(max_degree);
    f.set_real_pair(0, gauss(rng));
    for (int n = 1; n <= max_degree; ++n) f.set_real_pair(n, Complex(gauss(rng), gauss(rng)) / (1.0 + n * n));
    out.push_back(f);
  }
  return out;
}

namespace {

// Columns: random vectors supported on levels ≤ top, decaying with the level.
Eigen::MatrixXcd random_vectors(const LevelModule& m, int top, int count, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  Eigen::MatrixXcd v = Eigen::MatrixXcd::Zero(m.total_dim(), count);
  if (top < 0) return v;
  const int end = m.offset(std::min(top, m.cutoff()) + 1);
  for (int j = 0; j < count; ++j)
    for (int i = 0; i < end; ++i) {
      const double scale = 1.0 / (1.0 + m.level_of_index(i));
      v(i, j) = Complex(gauss(rng), gauss(rng)) * scale;
    }
  return v;
}

Eigen::VectorXd column_norms(const Eigen::MatrixXcd& m) { return m.colwise().norm().transpose(); }

struct Tally {
  double worst = -1e300;  // max observed/bound
  long long violations = 0;
  long long count = 0;
  void add(double observed, double bound) {
    ++count;
    if (bound <= 0.0) {
      if (observed > 1e-12) ++violations;
      return;
    }
    const double ratio = observed / bound;
    worst = std::max(worst, ratio);
    if (ratio > 1.0 + 1e-12) ++violations;
  }
  void report(Report& r, const std::string& name) const {
    Check& c = r.bound_check(name + ": violations", 0.0, static_cast<double>(violations),
                             std::to_string(count) + " checks, max observed/bound = " + std::to_string(worst));
    (void)c;
  }
};

}  // namespace

Report energy_bound_verify(const LevelModule& module, const std::vector<FourierFunction>& fs, int vectors,
                           std::uint64_t seed, int max_mode) {
  Report r("energy bounds on " + module.tag());
  std::mt19937_64 rng(seed);
  const double rc = std::sqrt(1.0 + module.central_charge() / 12.0);
  const Eigen::VectorXd e = module.energies();
  const Eigen::VectorXcd one_l0 = (Eigen::VectorXd::Ones(e.size()) + e).cast<Complex>();
  const Eigen::VectorXcd one_l0sq = (Eigen::VectorXd::Ones(e.size()) + e.cwiseProduct(e)).cast<Complex>();

  Tally linear;
  std::vector<TruncatedOperator> ops;
  for (const auto& f : fs) {
    ops.push_back(smear(f, module));
    const double norm = circlefn::norm_three_half(f).upper();
    const Eigen::MatrixXcd v = random_vectors(module, module.cutoff() - degree(f), vectors, rng);
    const Eigen::VectorXd lhs = column_norms(ops.back().matrix * v);
    const Eigen::VectorXd base = column_norms(one_l0.asDiagonal() * v);
    for (int j = 0; j < vectors; ++j) linear.add(lhs(j), rc * norm * base(j));
  }
  linear.report(r, "||T(f)v|| <= sqrt(1+c/12)||f||_{3/2}||(1+L0)v||");

  Tally single;
  const int top_mode = std::min({max_mode, module.max_mode(), module.cutoff()});
  for (int n = -top_mode; n <= top_mode; ++n) {
    const Eigen::MatrixXcd ln = module.mode(n).cast<Complex>();
    const Eigen::MatrixXcd v = random_vectors(module, module.cutoff() - std::max(0, -n), vectors, rng);
    const Eigen::VectorXd lhs = column_norms(ln * v);
    const Eigen::VectorXd base = column_norms(one_l0.asDiagonal() * v);
    const double k = rc * (1.0 + std::pow(std::abs(n), 1.5));
    for (int j = 0; j < vectors; ++j) single.add(lhs(j), k * base(j));
  }
  single.report(r, "||L_n v|| <= sqrt(1+c/12)(1+|n|^{3/2})||(1+L0)v||");

  Tally quadratic;
  for (std::size_t i = 0; i + 1 < fs.size(); ++i) {
    const auto& f1 = fs[i];
    const auto& f2 = fs[i + 1];
    const double r1 = rc * circlefn::norm_three_half(f1).upper();
    const double r2 = rc * circlefn::norm_three_half(f2).upper();
    const double r3 = rc * circlefn::norm_three_half(f2.derivative_function()).upper();
    const double bound = 2.0 * (r1 * r2 + r3);
    const Eigen::MatrixXcd v = random_vectors(module, module.cutoff() - degree(f1) - degree(f2), vectors, rng);
    const Eigen::VectorXd lhs = column_norms(ops[i].matrix * (ops[i + 1].matrix * v));
    const Eigen::VectorXd base = column_norms(one_l0sq.asDiagonal() * v);
    for (int j = 0; j < vectors; ++j) quadratic.add(lhs(j), bound * base(j));
  }
  quadratic.report(r, "||T(f1)T(f2)v|| <= 2(r1 r2 + r3)||(1+L0^2)v||");
  return r;
}

std::vector<double> log_grid(double lo, double hi, int per_decade) {
  if (!(lo > 0.0) || !(hi >= lo) || per_decade < 1) throw std::invalid_argument("bad grid");
  std::vector<double> g;
  const double a = std::log10(lo), b = std::log10(hi);
  const int steps = static_cast<int>(std::lround((b - a) * per_decade));
  for (int i = 0; i <= steps; ++i) g.push_back(std::pow(10.0, a + (b - a) * i / std::max(steps, 1)));
  return g;
}

double commutator_level_factor(double h, int k, int n, double eps) {
  return std::exp(-eps * (h + k)) - std::exp(-eps * (h + k - n));
}

Report commutator_norm_bound(const LevelModule& module, int max_mode, const std::vector<double>& eps_grid,
                             int vectors, std::uint64_t seed) {
  Report r("commutator norm bound on " + module.tag());
  std::mt19937_64 rng(seed);
  const double rc2 = 1.0 + module.central_charge() / 12.0;
  const int top_mode = std::min({max_mode, module.max_mode(), module.cutoff()});
  Tally t;
  for (int n = -top_mode; n <= top_mode; ++n) {
    if (n == 0) continue;
    const Eigen::MatrixXcd ln = module.mode(n).cast<Complex>();
    const Eigen::MatrixXcd v = random_vectors(module, module.cutoff() - std::max(0, -n), vectors, rng);
    const Eigen::VectorXd vn = column_norms(v);
    const double k = std::sqrt(3.0 * rc2 * std::pow(std::abs(n), 3));
    for (double eps : eps_grid) {
      Eigen::VectorXcd factor(module.total_dim());
      for (int i = 0; i < module.total_dim(); ++i)
        factor(i) = commutator_level_factor(module.lowest_weight(), module.level_of_index(i), n, eps);
      const Eigen::VectorXd lhs = column_norms(ln * (factor.asDiagonal() * v));
      for (int j = 0; j < vectors; ++j) t.add(lhs(j), k * vn(j));
    }
  }
  t.report(r, "||[L_n, e^{-eps L0}]v|| <= sqrt(3(1+c/12)|n|^3)||v||");
  return r;
}

namespace {

double operator_norm(const Eigen::MatrixXcd& m) {
  if (m.size() == 0) return 0.0;
  return Eigen::JacobiSVD<Eigen::MatrixXcd>(m).singularValues()(0);
}

}  // namespace

Report continuity_check(const FourierFunction& f, const std::vector<FourierFunction>& approximants,
                        const LevelModule& module) {
  Report r("smear continuity on " + module.tag());
  const double rc = std::sqrt(1.0 + module.central_charge() / 12.0);
  const double top = 1.0 + module.lowest_weight() + module.cutoff();
  const Eigen::MatrixXcd base = smear(f, module).matrix;
  double prev = 1e300;
  bool decreasing = true;
  for (std::size_t k = 0; k < approximants.size(); ++k) {
    const double diff = operator_norm(smear(approximants[k], module).matrix - base);
    const double bound = rc * circlefn::norm_three_half(approximants[k] - f).upper() * top;
    r.bound_check("||smear(f_" + std::to_string(k) + ") - smear(f)||", bound * (1.0 + 1e-12), diff);
    decreasing = decreasing && diff <= prev * (1.0 + 1e-12);
    prev = diff;
  }
  if (!decreasing) r.warnings.push_back("operator differences are not monotone along the sequence");
  return r;
}

Report linearity_check(const FourierFunction& f, const FourierFunction& g, double alpha, const LevelModule& module) {
  Report r("smear linearity on " + module.tag());
  const Eigen::MatrixXcd lhs = smear(f * alpha + g, module).matrix;
  const Eigen::MatrixXcd rhs = alpha * smear(f, module).matrix + smear(g, module).matrix;
  const double scale = std::max(1.0, rhs.cwiseAbs().maxCoeff());
  r.bound_check("max entry |smear(af+g) - a smear(f) - smear(g)|", 1e-13 * scale, (lhs - rhs).cwiseAbs().maxCoeff());
  return r;
}

QComplex central_pairing(const ExactTrig& g, const ExactTrig& f) {
  QComplex s;
  for (const auto& [n, fn] : f) {
    auto it = g.find(-n);
    if (it == g.end()) continue;
    const QComplex factor{Rational(0), Rational(n) * (Rational(1) - Rational(n) * n)};
    s -= it->second * factor * fn;
  }
  return s;
}

ExactTrig wronskian(const ExactTrig& g, const ExactTrig& f) {
  ExactTrig w;
  for (const auto& [a, ga] : g)
    for (const auto& [b, fb] : f) {
      // ĝ_a (ib) f̂_b − (ia) ĝ_a f̂_b
      const QComplex term = ga * fb * QComplex(Rational(0), Rational(b - a));
      if (term.is_zero()) continue;
      w[a + b] += term;
    }
  for (auto it = w.begin(); it != w.end();) it = it->second.is_zero() ? w.erase(it) : std::next(it);
  return w;
}

namespace {

verma::ComplexVermaState apply_t(const verma::VermaModule& mod, const ExactTrig& f, const verma::ComplexVermaState& v) {
  verma::ComplexVermaState out;
  for (const auto& [n, a] : f) out.add(mod.apply(n, v), a);
  return out;
}

int exact_degree(const ExactTrig& f) {
  int d = 0;
  for (const auto& [n, a] : f)
    if (!a.is_zero()) d = std::max(d, std::abs(n));
  return d;
}

}  // namespace

Report tt_commutator_check(const ExactTrig& f, const ExactTrig& g, const verma::VirasoroParams& params,
                           int max_level) {
  Report r("[T(g),T(f)] = iT(gf'-g'f) + i(c/12)(g,f)");
  const verma::VermaModule mod(params);
  const ExactTrig w = wronskian(g, f);
  const QComplex central = kI * QComplex(params.c / 12) * central_pairing(g, f);
  long long failures = 0, checked = 0;
  for (int k = 0; k <= max_level; ++k)
    for (const auto& p : verma::partitions(k)) {
      const auto v = verma::ComplexVermaState::basis(p);
      auto lhs = apply_t(mod, g, apply_t(mod, f, v)) - apply_t(mod, f, apply_t(mod, g, v));
      lhs.add(apply_t(mod, w, v), -kI);
      lhs.add(v, -central);
      ++checked;
      if (!lhs.is_zero()) ++failures;
    }
  r.bound_check("failing basis vectors", 0.0, static_cast<double>(failures),
                std::to_string(checked) + " checked, deg f + deg g = " +
                    std::to_string(exact_degree(f) + exact_degree(g)) + ", (g,f) = " +
                    format_qcomplex(central_pairing(g, f)));
  return r;
}

Complex PiRational::value() const {
  return Complex(to_double(rational.re), to_double(rational.im)) +
         Complex(to_double(over_pi.re), to_double(over_pi.im)) / kPi;
}

ExactTrig t_field(int n) {
  if (n < 1) throw std::invalid_argument("t field index must be positive");
  ExactTrig t;
  t[0] = QComplex(Rational(1, 2 * n));
  t[n] += QComplex(Rational(-1, 4 * n));
  t[-n] += QComplex(Rational(-1, 4 * n));
  return t;
}

namespace {

// (1/2π)∫ e^{ikθ} over [0,π] (upper) or [π,2π]: 1/2 for k = 0, else ±i(1 − (−1)^k)/(2πk).
PiRational half_circle_integral(int k, bool upper) {
  PiRational p;
  if (k == 0) {
    p.rational = QComplex(Rational(1, 2));
    return p;
  }
  const int odd = (k % 2 != 0) ? 2 : 0;
  const Rational s = Rational(odd) / (2 * k);
  p.over_pi = QComplex(Rational(0), upper ? s : -s);
  return p;
}

PiRational half_coeff(int n, bool upper) {
  PiRational out;
  for (const auto& [m, a] : t_field(2)) {
    const PiRational p = half_circle_integral(m - n, upper);
    out.rational += a * p.rational;
    out.over_pi += a * p.over_pi;
  }
  return out;
}

circlefn::PiecewiseTrig half_function(bool upper) {
  const circlefn::TrigPiece t2{{0.25, 0.0, -0.25}, {0.0, 0.0, 0.0}};
  const circlefn::TrigPiece zero{{0.0}, {0.0}};
  return circlefn::PiecewiseTrig({0.0, kPi}, upper ? std::vector{t2, zero} : std::vector{zero, t2});
}

FourierFunction to_fourier(const std::function<PiRational(int)>& coeff, int cutoff) {
  FourierFunction f(cutoff);
  for (int n = -cutoff; n <= cutoff; ++n) f.set_coeff(n, coeff(n).value());
  return f;
}

double lambda_min(const Eigen::MatrixXcd& m, int dim) {
  if (dim == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m.topLeftCorner(dim, dim), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

}  // namespace

PiRational t2_plus_coeff(int n) { return half_coeff(n, true); }
PiRational t2_minus_coeff(int n) { return half_coeff(n, false); }
circlefn::PiecewiseTrig t2_plus_function() { return half_function(true); }
circlefn::PiecewiseTrig t2_minus_function() { return half_function(false); }

Report t2_split(const verma::VirasoroParams& params, int cutoff, const T2SplitOptions& opts) {
  if (cutoff < 8) throw std::invalid_argument("t2_split needs cutoff >= 8");
  Report r("t2 split");
  const double c = to_double(params.c);

  // (i) exact coefficient identity
  const ExactTrig t2 = t_field(2);
  long long mismatches = 0;
  for (int n = -opts.coeff_cutoff; n <= opts.coeff_cutoff; ++n) {
    const PiRational p = t2_plus_coeff(n), m = t2_minus_coeff(n);
    const auto it = t2.find(n);
    const QComplex want = it == t2.end() ? QComplex() : it->second;
    if (!(p.rational + m.rational == want) || !(p.over_pi + m.over_pi).is_zero()) ++mismatches;
  }
  r.bound_check("coefficient identity t+ + t- = t2 (exact, |n| <= " + std::to_string(opts.coeff_cutoff) + ")", 0.0,
                static_cast<double>(mismatches));
  const auto plus = t2_plus_function();
  const FourierFunction fp_arc = plus.fourier(opts.coeff_cutoff);
  double arc_vs_exact = 0.0;
  for (int n = -opts.coeff_cutoff; n <= opts.coeff_cutoff; ++n)
    arc_vs_exact = std::max(arc_vs_exact, std::abs(fp_arc.coeff(n) - t2_plus_coeff(n).value()));
  r.bound_check("arc-integral coefficients vs exact form", 1e-14, arc_vs_exact);

  // t⁽²⁾ and t⁽²⁾₊ as functions
  r.bound_check("t2(+-1) = 0, t2'(+-1) = 0", 1e-15,
                std::max({std::abs(plus.pieces()[0].value(0.0)), std::abs(plus.pieces()[0].value(kPi)),
                          std::abs(plus.pieces()[0].value(0.0, 1)), std::abs(plus.pieces()[0].value(kPi, 1))}));
  r.bound_check("t+ C1 defect", 1e-15, plus.c1_defect());
  double minval = 0.0;
  for (int k = 0; k < 4096; ++k) minval = std::min(minval, plus.value(mobius::kTwoPi * k / 4096.0));
  r.bound_check("t+ >= 0 on 4096 samples", 0.0, -minval);

  // module with room for the Cauchy step
  const int big = cutoff + std::max(opts.cauchy_step, 0);
  const bool cauchy = opts.cauchy_step > 0;
  const LevelModule mod = verma::quotient_module_auto(params, big, 10, cauchy ? big : 2);
  const int dim_n = mod.offset(cutoff + 1);

  // (ii) λ_min(T(t⁽²⁾)) ≥ −c/32 and the Möb⁽²⁾ structure
  FourierFunction ft2(2);
  ft2.set_real_pair(0, 0.25);
  ft2.set_real_pair(2, -0.125);
  const Eigen::MatrixXcd tt2 = smear(ft2, mod).matrix;
  const double lmin = lambda_min(tt2, dim_n);
  r.bound_check("lambda_min(T(t2)) >= -c/32 - 1e-9 at N=" + std::to_string(cutoff), c / 32.0 + 1e-9, -lmin,
                "lambda_min=" + std::to_string(lmin));
  const Eigen::MatrixXd l0 = mod.mode(0), l2 = mod.mode(2), lm2 = mod.mode(-2);
  const Eigen::MatrixXd ident = Eigen::MatrixXd::Identity(l0.rows(), l0.cols());
  const Eigen::MatrixXd h2 = 0.5 * l0 + (c / 24.0) * (2.0 - 0.5) * ident;
  const Eigen::MatrixXd em = 0.5 * l2, ep = 0.5 * lm2;
  const int safe = mod.offset(big - 2 + 1);
  const Eigen::MatrixXd comm = em * ep - ep * em - 2.0 * h2;
  r.bound_check("[E-,E+] = 2H(2) on safe range", 1e-9, comm.leftCols(safe).cwiseAbs().maxCoeff());
  const Eigen::MatrixXd t2op = 0.5 * (h2 - 0.5 * (ep + em));
  const Eigen::MatrixXd t2pi = h2 - t2op;
  r.bound_check("T(t2) = T(2) - c/32", 1e-12,
                (tt2.real() - (t2op - (c / 32.0) * ident)).cwiseAbs().maxCoeff() + tt2.imag().cwiseAbs().maxCoeff());
  r.exact_check("T(2) + T(2)_pi = H(2)", (t2op + t2pi - h2).cwiseAbs().maxCoeff() <= 1e-15);
  const double tmin = lambda_min(t2op.cast<Complex>(), dim_n);
  r.bound_check("lambda_min(T(2) compression) >= 0", 1e-9, -tmin, "lambda_min=" + std::to_string(tmin));
  r.bound_check("H(2) >= c/24 (2 - 1/2)", 1e-12,
                c / 24.0 * 1.5 - lambda_min(h2.cast<Complex>(), dim_n));

  // (iii) Cauchy behaviour of the half-circle pieces
  if (cauchy) {
    for (bool upper : {true, false}) {
      const std::string name = upper ? "T(t+)" : "T(t-)";
      const FourierFunction f = to_fourier(upper ? t2_plus_coeff : t2_minus_coeff, big);
      const Eigen::MatrixXcd t = smear(f, mod).matrix;
      const double a = lambda_min(t, dim_n), b = lambda_min(t, mod.total_dim());
      r.bound_check("|lambda_min " + name + " (N=" + std::to_string(cutoff) + ") - (N=" + std::to_string(big) + ")|",
                    opts.cauchy_threshold, std::abs(a - b),
                    "lambda_min=" + std::to_string(a) + ", " + std::to_string(b));
      r.bound_check("lambda_min " + name + " nonincreasing in N", 1e-12, b - a);
    }
    const FourierFunction sum = to_fourier(t2_plus_coeff, big) + to_fourier(t2_minus_coeff, big);
    r.bound_check("T(t+) + T(t-) = T(t2)", 1e-13, (smear(sum, mod).matrix - tt2).cwiseAbs().maxCoeff());
  }
  return r;
}

}  // namespace chiral::smeared
