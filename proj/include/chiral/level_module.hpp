#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace chiral {

// Positive-energy module truncated at levels ≤ cutoff, in an orthonormal basis
// ordered by level. Modes are stored as lowering blocks L_n: level k → k−n
// (n ≥ 1); raising modes are their transposes.
class LevelModule {
 public:
  LevelModule(std::string tag, double c, double h, std::vector<int> dims, int max_mode);

  const std::string& tag() const { return tag_; }
  double central_charge() const { return c_; }
  double lowest_weight() const { return h_; }
  int cutoff() const { return static_cast<int>(dims_.size()) - 1; }
  int max_mode() const { return max_mode_; }
  const std::vector<int>& dims() const { return dims_; }
  int dim(int level) const { return dims_.at(level); }
  int offset(int level) const { return offsets_.at(level); }
  int total_dim() const { return offsets_.back(); }
  int level_of_index(int i) const;

  // d_{k−n} × d_k; empty when k < n. Requires 1 ≤ n ≤ max_mode.
  const Eigen::MatrixXd& lowering(int n, int k) const;
  void set_lowering(int n, int k, Eigen::MatrixXd block);

  // Full total_dim × total_dim matrix of L_n; L_0 is diagonal h + level.
  Eigen::MatrixXd mode(int n) const;
  // Adds scale·L_n into m (real or imaginary part chosen by the caller).
  void accumulate_mode(int n, double scale, Eigen::MatrixXd& m) const;
  Eigen::VectorXd energies() const;

 private:
  std::string tag_;
  double c_;
  double h_;
  std::vector<int> dims_;
  std::vector<int> offsets_;
  int max_mode_;
  std::vector<std::vector<Eigen::MatrixXd>> lowering_;  // [n-1][k]
};

struct SymmetricEigen {
  Eigen::VectorXd values;  // ascending
  Eigen::MatrixXd vectors;
};
// Handles the empty matrix, which Eigen's solver rejects.
SymmetricEigen symmetric_eigen(const Eigen::MatrixXd& m, bool with_vectors = true);

// max |([L_n,L_m] − (n−m)L_{n+m} − c/12(n³−n)δ)v| over basis vectors v of
// level ≤ cutoff − |n| − |m|, for |n|,|m| ≤ max_mode.
double virasoro_residual(const LevelModule& module, int max_mode);

}  // namespace chiral
