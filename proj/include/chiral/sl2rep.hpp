#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "chiral/level_module.hpp"
#include "chiral/report.hpp"

namespace chiral::sl2 {

// Lowest-weight module of the covering group of Möb on ξ_h, …, ξ_{h+N}:
// h_op ξ_{h+n} = (h+n)ξ_{h+n}, e₊ξ_{h+n} = √((2h+n)(n+1)) ξ_{h+n+1},
// e₋ξ_{h+n} = √((2h+n−1)n) ξ_{h+n−1}.
class LowestWeightSL2 {
 public:
  // Throws std::invalid_argument unless h > 0 and cutoff ≥ 1.
  LowestWeightSL2(double h, int cutoff);

  double lowest_weight() const { return h_; }
  int cutoff() const { return cutoff_; }
  // Relations involving e₊ are exact on indices ≤ safe_index().
  int safe_index() const { return cutoff_ - 1; }
  const Eigen::MatrixXd& h_op() const { return h_op_; }
  const Eigen::MatrixXd& e_plus() const { return e_plus_; }
  const Eigen::MatrixXd& e_minus() const { return e_minus_; }

  // L₀ = h_op, L₋₁ = e₊, L₁ = e₋; central charge 0.
  LevelModule as_level_module() const;

 private:
  double h_;
  int cutoff_;
  Eigen::MatrixXd h_op_, e_plus_, e_minus_;
};

// [e₋,e₊] = 2h_op and [h_op, e_±] = ±e_± on the safe range.
Report ladder_check(const LowestWeightSL2& rep);
// (H² − H − E₊E₋)ξ = (h² − h)ξ at every retained level.
Report casimir_check(const LowestWeightSL2& rep);

struct Generators {
  Eigen::MatrixXd h;
  Eigen::MatrixXd t;       // (H − (E₊+E₋)/2)/2
  Eigen::MatrixXd d_real;  // (E₊−E₋)/2, real antisymmetric; D = −i·d_real
  Eigen::MatrixXd t_pi;    // H − T
};
Generators generators_htd(const LowestWeightSL2& rep);
// T + T_π = H, compression positivity of T and T_π, spectrum of H.
Report generator_check(const LowestWeightSL2& rep);

// ‖e₋v‖ ≤ ‖h_op v‖ and ‖e₊v‖ ≤ ‖(1+h_op)v‖ on random v supported on levels
// ≤ N−1, per basis vector, and as operator norms via singular values.
Report energy_bounds_check(const LowestWeightSL2& rep, int samples = 100, std::uint64_t seed = 0);

// Finite surrogate for the analytic-vector estimate: ‖qⁿξ_h‖ ≤ rⁿ n! with
// q = e₊ + e₋ and r = 2(1+h), for n ≤ N−1. Not a proof of analyticity.
Report analytic_vector_surrogate(const LowestWeightSL2& rep);

}  // namespace chiral::sl2
