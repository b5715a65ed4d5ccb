#include "chiral/quotient.hpp"

#include <cmath>
#include <stdexcept>

namespace chiral::verma {

namespace {

void require_unitary(const VirasoroParams& params) {
  if (classify_unitarity(params, 0).kind == Classification::Kind::non_unitary) {
    throw std::domain_error("non-unitary parameters c=" + format_rational(params.c) +
                            " h=" + format_rational(params.h));
  }
}

struct LevelData {
  std::vector<std::size_t> pivots;
  Eigen::MatrixXd w;  // pivot coordinates of the orthonormal basis, one column per vector
};

// G_target[P_target, :] · coords(L_n v_{P_source}) as a float matrix.
Eigen::MatrixXd paired_images(const VermaModule& mod, int n, int source_level, const LevelData& src,
                              const LevelData& dst) {
  const int target_level = source_level - n;
  const GramMatrix& gs = mod.gram(source_level);
  const GramMatrix& gt = mod.gram(target_level);
  Eigen::MatrixXd m(dst.pivots.size(), src.pivots.size());
  for (std::size_t j = 0; j < src.pivots.size(); ++j) {
    auto x = coordinates(mod.apply_basis(n, gs.basis[src.pivots[j]]), gt.basis);
    for (std::size_t p = 0; p < dst.pivots.size(); ++p) {
      Rational s = 0;
      for (std::size_t l = 0; l < x.size(); ++l)
        if (x[l] != 0) s += gt.entries(dst.pivots[p], l) * x[l];
      m(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(j)) = to_double(s);
    }
  }
  return m;
}

}  // namespace

ExactQuotient build_exact_quotient(const VirasoroParams& params, int cutoff) {
  if (cutoff < 0) throw std::invalid_argument("negative cutoff");
  require_unitary(params);
  VermaModule mod(params);
  std::vector<LevelData> levels(static_cast<std::size_t>(cutoff) + 1);
  std::vector<int> dims, verma_dims;
  for (int k = 0; k <= cutoff; ++k) {
    const GramMatrix& g = mod.gram(k);
    verma_dims.push_back(static_cast<int>(g.basis.size()));
    LevelData& ld = levels[k];
    ld.pivots = pivot_columns(g.entries);
    const auto r = static_cast<Eigen::Index>(ld.pivots.size());
    Eigen::MatrixXd q(r, r);
    for (Eigen::Index i = 0; i < r; ++i)
      for (Eigen::Index j = 0; j < r; ++j) q(i, j) = to_double(g.entries(ld.pivots[i], ld.pivots[j]));
    const SymmetricEigen es = symmetric_eigen(q);
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < r; ++i)
      if (es.values(i) >= 1e-12) keep.push_back(i);
    ld.w.resize(r, static_cast<Eigen::Index>(keep.size()));
    for (std::size_t c = 0; c < keep.size(); ++c)
      ld.w.col(static_cast<Eigen::Index>(c)) = es.vectors.col(keep[c]) / std::sqrt(es.values(keep[c]));
    dims.push_back(static_cast<int>(keep.size()));
  }
  ExactQuotient out{LevelModule("verma-quotient", to_double(params.c), to_double(params.h), dims, cutoff), 0.0,
                    verma_dims};
  for (int n = 1; n <= cutoff; ++n)
    for (int k = n; k <= cutoff; ++k) {
      const LevelData& src = levels[k];
      const LevelData& dst = levels[k - n];
      Eigen::MatrixXd down = dst.w.transpose() * paired_images(mod, n, k, src, dst) * src.w;
      Eigen::MatrixXd up = src.w.transpose() * paired_images(mod, -n, k - n, dst, src) * dst.w;
      if (down.size() > 0) {
        out.hermiticity_defect =
            std::max(out.hermiticity_defect, (down.transpose() - up).cwiseAbs().maxCoeff());
      }
      out.module.set_lowering(n, k, std::move(down));
    }
  return out;
}

LevelModule quotient_module(const VirasoroParams& params, int cutoff) {
  return build_exact_quotient(params, cutoff).module;
}

LevelModule quotient_module_recursive(const VirasoroParams& params, int cutoff, double rel_tol, int max_mode) {
  if (cutoff < 0) throw std::invalid_argument("negative cutoff");
  require_unitary(params);
  const double c = to_double(params.c);
  const double h = to_double(params.h);
  std::vector<int> dims{1};
  // l1[k]: d_{k−1} × d_k, l2[k]: d_{k−2} × d_k
  std::vector<Eigen::MatrixXd> l1{Eigen::MatrixXd(0, 1)}, l2{Eigen::MatrixXd(0, 1)};
  auto block_or_empty = [&](std::vector<Eigen::MatrixXd>& v, int k, int n) -> Eigen::MatrixXd {
    if (k < n) return Eigen::MatrixXd(0, k >= 0 ? dims[k] : 0);
    return v[k];
  };
  for (int k = 1; k <= cutoff; ++k) {
    const int d1 = dims[k - 1];
    const int d2 = k >= 2 ? dims[k - 2] : 0;
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(d1 + d2, d1 + d2);
    // ⟨L₋₁x, L₋₁y⟩ = ⟨L₁x, L₁y⟩ + 2(h+k−1)⟨x,y⟩
    Eigen::MatrixXd a1 = block_or_empty(l1, k - 1, 1);
    g.topLeftCorner(d1, d1) = a1.transpose() * a1 + 2.0 * (h + k - 1) * Eigen::MatrixXd::Identity(d1, d1);
    if (d2 > 0) {
      // ⟨L₋₂x, L₋₂y⟩ = ⟨L₂x, L₂y⟩ + (4(h+k−2) + c/2)⟨x,y⟩
      Eigen::MatrixXd a2 = block_or_empty(l2, k - 2, 2);
      g.bottomRightCorner(d2, d2) =
          a2.transpose() * a2 + (4.0 * (h + k - 2) + c / 2.0) * Eigen::MatrixXd::Identity(d2, d2);
      // ⟨L₋₁x, L₋₂y⟩ = ⟨L₂x, L₁y⟩ + 3⟨L₁x, y⟩
      Eigen::MatrixXd b2 = block_or_empty(l2, k - 1, 2);
      Eigen::MatrixXd b1 = block_or_empty(l1, k - 2, 1);
      Eigen::MatrixXd cross = b2.transpose() * b1 + 3.0 * a1.transpose();
      g.topRightCorner(d1, d2) = cross;
      g.bottomLeftCorner(d2, d1) = cross.transpose();
    }
    const SymmetricEigen es = symmetric_eigen(g);
    const double scale = std::max(1.0, es.values.size() ? es.values.maxCoeff() : 1.0);
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < g.rows(); ++i)
      if (es.values(i) > rel_tol * scale) keep.push_back(i);
    Eigen::MatrixXd w(g.rows(), static_cast<Eigen::Index>(keep.size()));
    for (std::size_t j = 0; j < keep.size(); ++j)
      w.col(static_cast<Eigen::Index>(j)) = es.vectors.col(keep[j]) / std::sqrt(es.values(keep[j]));
    // ⟨e^{(k−1)}_p, L₁ e⟩ = ⟨L₋₁e^{(k−1)}_p, e⟩: the candidate Gram rows give the lowering blocks.
    Eigen::MatrixXd gw = g * w;
    l1.push_back(gw.topRows(d1));
    l2.push_back(gw.bottomRows(d2));
    dims.push_back(static_cast<int>(keep.size()));
  }
  const int top = max_mode < 0 ? cutoff : std::max(std::min(max_mode, cutoff), std::min(2, cutoff));
  LevelModule mod("verma-quotient", c, h, dims, top);
  for (int k = 1; k <= cutoff; ++k) mod.set_lowering(1, k, l1[k]);
  for (int k = 2; k <= cutoff; ++k) mod.set_lowering(2, k, l2[k]);
  // (n−1)L_{n+1} = L_n L₁ − L₁ L_n
  for (int n = 2; n < top; ++n)
    for (int k = n + 1; k <= cutoff; ++k) {
      Eigen::MatrixXd next =
          (mod.lowering(n, k - 1) * mod.lowering(1, k) - mod.lowering(1, k - n) * mod.lowering(n, k)) / (n - 1.0);
      mod.set_lowering(n + 1, k, std::move(next));
    }
  return mod;
}

LevelModule quotient_module_auto(const VirasoroParams& params, int cutoff, int exact_limit, int max_mode) {
  return cutoff <= exact_limit ? quotient_module(params, cutoff) : quotient_module_recursive(params, cutoff, 1e-9, max_mode);
}

}  // namespace chiral::verma
