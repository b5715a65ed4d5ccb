#pragma once

#include <vector>

#include "chiral/level_module.hpp"
#include "chiral/report.hpp"
#include "chiral/verma.hpp"

namespace chiral::heisenberg {

using verma::Partition;
// Σ coeff·J_{−λ₁}…J_{−λ_k}Ω over partitions λ.
using FockState = verma::BasicState<Rational>;

// [J_n, J_m] = nδ_{n,−m}, J_nΩ = 0 for n ≥ 0.
FockState apply_J(int n, const FockState& v);
// ⟨λ|λ⟩ = ∏ i^{m_i} m_i!; distinct basis vectors are orthogonal.
Rational fock_norm(const Partition& p);
Rational fock_inner(const FockState& u, const FockState& v);

// ½:J²:_n = ½(Σ_{k+n≥−k} J_{−k}J_{k+n} + Σ_{k+n<−k} J_{k+n}J_{−k}).
FockState apply_sugawara(int n, const FockState& v);
// Matrix on Fock levels ≤ cutoff, columns = source basis vectors.
verma::ExactOperator sugawara_matrix(int n, int cutoff);

// c = 1 Virasoro relations on basis vectors of level ≤ max_level − |n| − |m|.
Report virasoro_check_c1(int max_level, int max_mode);
// Hermiticity ⟨λ, L_n μ⟩ = ⟨L₋ₙλ, μ⟩ on the safe range, exact.
Report hermiticity_check(int max_level, int max_mode);

struct Character {
  std::vector<long long> dims;  // p(k), k ≤ N
  double partial_trace(double beta) const;
  // ∏_{n≤N} (1 − e^{−βn})⁻¹
  double euler_partial(double beta) const;
  // Σ_{k>N} p(k)e^{−βk}, an upper bound for euler_partial − partial_trace.
  double tail_bound(double beta) const;
};
Character character(int cutoff);

// Fock module in the orthonormal basis |λ⟩/‖λ‖, c = 1, h = 0.
LevelModule fock_module(int cutoff, int max_mode);

}  // namespace chiral::heisenberg
