#pragma once

#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "kamlie/toeplitz.hpp"

namespace kamlie {

using SparseOp = Eigen::SparseMatrix<cplx, Eigen::ColMajor>;

/// Finite box {|l|_inf <= L} x {0..M} x {+, -} of the full lattice.
/// Row order: lattice point (lexicographic), then sign, then label.
class LatticeBox {
 public:
  LatticeBox(int d, int L, int max_label);

  int dim() const { return d_; }
  int radius() const { return L_; }
  int labels() const { return n_; }
  int size() const { return static_cast<int>(points_.size()) * 2 * n_; }
  const std::vector<Shift>& points() const { return points_; }

  int point_index(const Shift& l) const;
  /// Row of site (l, m, a); -1 when l is outside the box.
  int index(const Shift& l, int m, int a) const;
  SiteIndex site(int row) const;
  /// Rows whose time index satisfies |l|_inf <= inner.
  std::vector<int> interior_rows(int inner) const;

 private:
  int d_, L_, n_;
  std::vector<Shift> points_;
};

/// Brute-force matrix of a Toeplitz operator on a box; couplings leaving the
/// box are dropped.
SparseOp materialize(const ToeplitzOperator& M, const LatticeBox& box);

/// diag(i (lambda omega . l + a mu_m)), the diagonal symbol on the box.
SparseOp materialize_symbol(const LatticeBox& box, const std::vector<double>& lambda_omega,
                            const std::vector<double>& mu);

/// Reads shifts |h|_inf <= H back from the rows at l = 0.
ToeplitzOperator read_back(const SparseOp& Mat, const LatticeBox& box, const GroupSpec& g, int H);

/// exp(A) X by Taylor series, stopped when a term's max entry is below tol.
Eigen::MatrixXcd expm_apply(const SparseOp& A, const Eigen::MatrixXcd& X, double tol = 1e-18);

/// Columns of the identity on the given rows.
Eigen::MatrixXcd identity_columns(int size, const std::vector<int>& rows);

}  // namespace kamlie
