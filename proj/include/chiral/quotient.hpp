#pragma once

#include "chiral/level_module.hpp"
#include "chiral/verma.hpp"

namespace chiral::verma {

struct ExactQuotient {
  LevelModule module;
  // max |L_n block ᵀ − L₋ₙ block| with both sides computed independently.
  double hermiticity_defect = 0.0;
  std::vector<int> verma_dims;
};

// Exact route: per level Gram, exact kernel quotient via pivot columns, then
// float eigen-decomposition of the nondegenerate quotient Gram.
// Throws std::domain_error for non-unitary parameters.
ExactQuotient build_exact_quotient(const VirasoroParams& params, int cutoff);
LevelModule quotient_module(const VirasoroParams& params, int cutoff);

// Float route for large cutoffs: level k is spanned by L₋₁(level k−1) and
// L₋₂(level k−2); their Gram follows from the stored L₁, L₂ blocks, and higher
// lowering modes come from L_{n+1} = [L_n, L₁]/(n−1). Modes above max_mode
// (default: all) are not built.
LevelModule quotient_module_recursive(const VirasoroParams& params, int cutoff, double rel_tol = 1e-9,
                                      int max_mode = -1);

// Exact route up to exact_limit, float route above.
LevelModule quotient_module_auto(const VirasoroParams& params, int cutoff, int exact_limit = 10, int max_mode = -1);

}  // namespace chiral::verma
