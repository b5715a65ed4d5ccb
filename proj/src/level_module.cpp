#include "chiral/level_module.hpp"

#include <stdexcept>

namespace chiral {

LevelModule::LevelModule(std::string tag, double c, double h, std::vector<int> dims, int max_mode)
    : tag_(std::move(tag)), c_(c), h_(h), dims_(std::move(dims)), max_mode_(max_mode) {
  if (dims_.empty()) throw std::invalid_argument("module needs at least level 0");
  offsets_.assign(dims_.size() + 1, 0);
  for (std::size_t k = 0; k < dims_.size(); ++k) offsets_[k + 1] = offsets_[k] + dims_[k];
  lowering_.resize(static_cast<std::size_t>(std::max(max_mode_, 0)));
  for (int n = 1; n <= max_mode_; ++n) {
    auto& row = lowering_[n - 1];
    row.resize(dims_.size());
    for (int k = 0; k <= cutoff(); ++k) row[k] = Eigen::MatrixXd::Zero(k >= n ? dims_[k - n] : 0, dims_[k]);
  }
}

int LevelModule::level_of_index(int i) const {
  for (int k = 0; k <= cutoff(); ++k)
    if (i < offsets_[k + 1]) return k;
  throw std::out_of_range("basis index out of range");
}

const Eigen::MatrixXd& LevelModule::lowering(int n, int k) const {
  if (n < 1 || n > max_mode_) throw std::out_of_range("mode " + std::to_string(n) + " not available in " + tag_);
  return lowering_[n - 1].at(k);
}

void LevelModule::set_lowering(int n, int k, Eigen::MatrixXd block) {
  if (n < 1 || n > max_mode_) throw std::out_of_range("mode out of range");
  const int rows = k >= n ? dims_[k - n] : 0;
  if (block.rows() != rows || block.cols() != dims_[k]) throw std::invalid_argument("block shape mismatch");
  lowering_[n - 1].at(k) = std::move(block);
}

void LevelModule::accumulate_mode(int n, double scale, Eigen::MatrixXd& m) const {
  if (scale == 0.0) return;
  if (n == 0) {
    for (int k = 0; k <= cutoff(); ++k)
      for (int i = offsets_[k]; i < offsets_[k + 1]; ++i) m(i, i) += scale * (h_ + k);
    return;
  }
  const int a = std::abs(n);
  if (a > cutoff()) return;
  if (a > max_mode_) throw std::out_of_range("mode " + std::to_string(n) + " not available in " + tag_);
  for (int k = a; k <= cutoff(); ++k) {
    const Eigen::MatrixXd& b = lowering_[a - 1][k];
    if (b.size() == 0) continue;
    if (n > 0) {
      m.block(offsets_[k - a], offsets_[k], b.rows(), b.cols()) += scale * b;
    } else {
      m.block(offsets_[k], offsets_[k - a], b.cols(), b.rows()) += scale * b.transpose();
    }
  }
}

Eigen::MatrixXd LevelModule::mode(int n) const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(total_dim(), total_dim());
  accumulate_mode(n, 1.0, m);
  return m;
}

Eigen::VectorXd LevelModule::energies() const {
  Eigen::VectorXd e(total_dim());
  for (int k = 0; k <= cutoff(); ++k)
    for (int i = offsets_[k]; i < offsets_[k + 1]; ++i) e(i) = h_ + k;
  return e;
}

SymmetricEigen symmetric_eigen(const Eigen::MatrixXd& m, bool with_vectors) {
  if (m.rows() == 0) return {Eigen::VectorXd(0), Eigen::MatrixXd(0, 0)};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, with_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  return {es.eigenvalues(), with_vectors ? es.eigenvectors() : Eigen::MatrixXd()};
}

double virasoro_residual(const LevelModule& module, int max_mode) {
  const int top_mode = std::min(max_mode, module.max_mode());
  std::vector<Eigen::MatrixXd> modes;
  for (int n = -2 * top_mode; n <= 2 * top_mode; ++n) {
    modes.push_back(std::abs(n) <= module.max_mode() || std::abs(n) > module.cutoff()
                        ? module.mode(n)
                        : Eigen::MatrixXd::Zero(module.total_dim(), module.total_dim()));
  }
  auto L = [&](int n) -> const Eigen::MatrixXd& { return modes[static_cast<std::size_t>(n + 2 * top_mode)]; };
  double worst = 0.0;
  for (int n = -top_mode; n <= top_mode; ++n)
    for (int m = -top_mode; m <= top_mode; ++m) {
      const int top = module.cutoff() - std::abs(n) - std::abs(m);
      if (top < 0) continue;
      if (std::abs(n + m) > module.max_mode() && std::abs(n + m) <= module.cutoff()) continue;
      const int cols = module.offset(top + 1);
      Eigen::MatrixXd r = L(n) * L(m).leftCols(cols) - L(m) * L(n).leftCols(cols) - (n - m) * L(n + m).leftCols(cols);
      if (n + m == 0) {
        r -= module.central_charge() / 12.0 * (n * n * n - n) * Eigen::MatrixXd::Identity(module.total_dim(), cols);
      }
      if (r.size() > 0) worst = std::max(worst, r.cwiseAbs().maxCoeff());
    }
  return worst;
}

}  // namespace chiral
