#include "chiral/sl2rep.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace chiral::sl2 {

LowestWeightSL2::LowestWeightSL2(double h, int cutoff) : h_(h), cutoff_(cutoff) {
  if (!(h > 0.0)) throw std::invalid_argument("lowest weight must be positive");
  if (cutoff < 1) throw std::invalid_argument("cutoff must be at least 1");
  const int d = cutoff + 1;
  h_op_ = Eigen::MatrixXd::Zero(d, d);
  e_plus_ = Eigen::MatrixXd::Zero(d, d);
  e_minus_ = Eigen::MatrixXd::Zero(d, d);
  for (int n = 0; n < d; ++n) {
    h_op_(n, n) = h + n;
    if (n + 1 < d) e_plus_(n + 1, n) = std::sqrt((2.0 * h + n) * (n + 1.0));
    if (n > 0) e_minus_(n - 1, n) = std::sqrt((2.0 * h + n - 1.0) * n);
  }
}

LevelModule LowestWeightSL2::as_level_module() const {
  LevelModule m("sl2", 0.0, h_, std::vector<int>(static_cast<std::size_t>(cutoff_) + 1, 1), 1);
  for (int k = 1; k <= cutoff_; ++k) m.set_lowering(1, k, Eigen::MatrixXd::Constant(1, 1, e_minus_(k - 1, k)));
  return m;
}

namespace {

// max column norm over basis indices ≤ last
double column_residual(const Eigen::MatrixXd& m, int last) {
  double worst = 0.0;
  for (int j = 0; j <= last; ++j) worst = std::max(worst, m.col(j).norm());
  return worst;
}

}  // namespace

Report ladder_check(const LowestWeightSL2& rep) {
  Report r{"sl2 ladder relations"};
  const auto& h = rep.h_op();
  const auto& ep = rep.e_plus();
  const auto& em = rep.e_minus();
  const int last = rep.safe_index();
  r.bound_check("[e-,e+] = 2h", 1e-10, column_residual(em * ep - ep * em - 2.0 * h, last));
  r.bound_check("[h,e+] = e+", 1e-10, column_residual(h * ep - ep * h - ep, last));
  r.bound_check("[h,e-] = -e-", 1e-10, column_residual(h * em - em * h + em, last));
  r.bound_check("e- xi_h = 0", 0.0, em.col(0).norm());
  return r;
}

Report casimir_check(const LowestWeightSL2& rep) {
  Report r{"sl2 Casimir"};
  const auto& h = rep.h_op();
  const double lambda = rep.lowest_weight() * rep.lowest_weight() - rep.lowest_weight();
  const Eigen::MatrixXd c = h * h - h - rep.e_plus() * rep.e_minus();
  const Eigen::MatrixXd res = c - lambda * Eigen::MatrixXd::Identity(h.rows(), h.cols());
  r.bound_check("Casimir eigenvalue h^2-h at every level", 1e-10, column_residual(res, rep.cutoff()),
                "lambda=" + std::to_string(lambda));
  return r;
}

Generators generators_htd(const LowestWeightSL2& rep) {
  Generators g;
  g.h = rep.h_op();
  const Eigen::MatrixXd sum = rep.e_plus() + rep.e_minus();
  g.t = (g.h - 0.5 * sum) * 0.5;
  g.d_real = 0.5 * (rep.e_plus() - rep.e_minus());
  g.t_pi = g.h - g.t;
  return g;
}

Report generator_check(const LowestWeightSL2& rep) {
  Report r{"sl2 generators"};
  const Generators g = generators_htd(rep);
  r.exact_check("T + T_pi = H", (g.t + g.t_pi - g.h).cwiseAbs().maxCoeff() == 0.0);
  r.bound_check("T symmetric", 0.0, (g.t - g.t.transpose()).cwiseAbs().maxCoeff());
  r.bound_check("D antisymmetric part", 0.0, (g.d_real + g.d_real.transpose()).cwiseAbs().maxCoeff());
  const double tmin = symmetric_eigen(g.t, false).values.minCoeff();
  const double pmin = symmetric_eigen(g.t_pi, false).values.minCoeff();
  r.bound_check("lambda_min(T compression) >= -1e-10", 1e-10, -tmin, "lambda_min=" + std::to_string(tmin));
  r.bound_check("lambda_min(T_pi compression) >= -1e-10", 1e-10, -pmin, "lambda_min=" + std::to_string(pmin));
  double spec = 0.0;
  for (int n = 0; n <= rep.cutoff(); ++n) spec = std::max(spec, std::abs(g.h(n, n) - (rep.lowest_weight() + n)));
  r.bound_check("Sp(H) = h + {0..N}", 0.0, spec);
  r.bound_check("min diag H = h", 0.0, std::abs(g.h.diagonal().minCoeff() - rep.lowest_weight()));
  return r;
}

Report energy_bounds_check(const LowestWeightSL2& rep, int samples, std::uint64_t seed) {
  Report r{"sl2 energy bounds"};
  const int d = rep.cutoff() + 1;
  const int live = d - 1;  // levels ≤ N−1
  const auto& h = rep.h_op();
  const Eigen::MatrixXd one_h = Eigen::MatrixXd::Identity(d, d) + h;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  double worst_minus = -1e300, worst_plus = -1e300;
  int violations = 0;
  for (int s = 0; s < samples; ++s) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(d);
    for (int i = 0; i < live; ++i) v(i) = gauss(rng) / (1.0 + i);
    // relative slack, positive means violated
    const double dm = (rep.e_minus() * v).norm() / (h * v).norm() - 1.0;
    const double dp = (rep.e_plus() * v).norm() / (one_h * v).norm() - 1.0;
    worst_minus = std::max(worst_minus, dm);
    worst_plus = std::max(worst_plus, dp);
    if (dm > 1e-12 || dp > 1e-12) ++violations;
  }
  double per_level = -1e300;
  for (int n = 0; n < live; ++n) {
    const double lhs = (2.0 * rep.lowest_weight() + n) * (n + 1.0);
    const double rhs = std::pow(1.0 + rep.lowest_weight() + n, 2);
    per_level = std::max(per_level, lhs - rhs);
  }
  r.bound_check("random v: ||e-v||/||Hv|| - 1", 1e-12, worst_minus, std::to_string(samples) + " samples");
  r.bound_check("random v: ||e+v||/||(1+H)v|| - 1", 1e-12, worst_plus, std::to_string(samples) + " samples");
  r.bound_check("violations", 0.0, violations);
  r.bound_check("per level (2h+n)(n+1) - (1+h+n)^2", 0.0, per_level);
  // operator norms on the retained range: σ_max(e_± (·)^{-1}) ≤ 1
  const Eigen::MatrixXd p_minus = rep.e_minus().leftCols(live) * h.diagonal().head(live).cwiseInverse().asDiagonal();
  const Eigen::MatrixXd p_plus = rep.e_plus().leftCols(live) * one_h.diagonal().head(live).cwiseInverse().asDiagonal();
  const double s_minus = Eigen::JacobiSVD<Eigen::MatrixXd>(p_minus).singularValues()(0);
  const double s_plus = Eigen::JacobiSVD<Eigen::MatrixXd>(p_plus).singularValues()(0);
  r.bound_check("sigma_max(e- H^-1)", 1.0 + 1e-12, s_minus);
  r.bound_check("sigma_max(e+ (1+H)^-1)", 1.0 + 1e-12, s_plus);
  return r;
}

Report analytic_vector_surrogate(const LowestWeightSL2& rep) {
  Report r{"sl2 analytic-vector surrogate"};
  const int d = rep.cutoff() + 1;
  const Eigen::MatrixXd q = rep.e_plus() + rep.e_minus();
  const double rate = 2.0 * (1.0 + rep.lowest_weight());
  Eigen::VectorXd v = Eigen::VectorXd::Zero(d);
  v(0) = 1.0;
  double worst = 0.0;  // max log(‖qⁿξ‖ / (rⁿ n!))
  double log_bound = 0.0;
  for (int n = 1; n < d; ++n) {
    v = q * v;
    log_bound += std::log(rate * n);
    worst = std::max(worst, std::log(v.norm()) - log_bound);
  }
  r.bound_check("max_n log(||q^n xi_h|| / (r^n n!))", 0.0, worst, "r=" + std::to_string(rate));
  r.warnings.push_back("finite-N growth check only; does not prove analyticity");
  return r;
}

}  // namespace chiral::sl2
