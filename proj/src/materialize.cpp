#include "kamlie/materialize.hpp"

#include <cmath>
#include <stdexcept>

namespace kamlie {

LatticeBox::LatticeBox(int d, int L, int max_label) : d_(d), L_(L), n_(max_label + 1) {
  if (d < 1 || L < 0 || max_label < 0) throw std::invalid_argument("LatticeBox: bad sizes");
  for_each_shift(d, L, [&](const Shift& l) { points_.push_back(l); });
}

int LatticeBox::point_index(const Shift& l) const {
  int idx = 0;
  for (int i = 0; i < d_; ++i) {
    if (std::abs(l[i]) > L_) return -1;
    idx = idx * (2 * L_ + 1) + (l[i] + L_);
  }
  return idx;
}

int LatticeBox::index(const Shift& l, int m, int a) const {
  const int p = point_index(l);
  if (p < 0) return -1;
  return p * 2 * n_ + sign_index(a) * n_ + m;
}

SiteIndex LatticeBox::site(int row) const {
  const int p = row / (2 * n_);
  const int rem = row % (2 * n_);
  return {points_[static_cast<std::size_t>(p)], rem % n_, sign_of(rem / n_)};
}

std::vector<int> LatticeBox::interior_rows(int inner) const {
  std::vector<int> rows;
  for (int r = 0; r < size(); ++r)
    if (inf_norm(site(r).l) <= inner) rows.push_back(r);
  return rows;
}

SparseOp materialize(const ToeplitzOperator& M, const LatticeBox& box) {
  if (M.dim() != box.dim() || M.labels() != box.labels())
    throw std::invalid_argument("materialize: operator and box disagree");
  const int n = box.labels();
  std::vector<Eigen::Triplet<cplx>> trips;
  for (const Shift& l : box.points()) {
    for (const auto& [h, b] : M.blocks()) {
      const Shift lp = l - h;
      if (box.point_index(lp) < 0) continue;
      for (int p = 0; p < 2; ++p)
        for (int q = 0; q < 2; ++q) {
          if (!b.has(p, q)) continue;
          const auto& part = b.part(p, q);
          for (int m = 0; m < n; ++m)
            for (int mp = 0; mp < n; ++mp) {
              const cplx v = part(m, mp);
              if (v == cplx{}) continue;
              trips.emplace_back(box.index(l, m, sign_of(p)), box.index(lp, mp, sign_of(q)), v);
            }
        }
    }
  }
  SparseOp out(box.size(), box.size());
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

SparseOp materialize_symbol(const LatticeBox& box, const std::vector<double>& lambda_omega,
                            const std::vector<double>& mu) {
  if (static_cast<int>(mu.size()) != box.labels()) throw std::invalid_argument("materialize_symbol: mu size");
  std::vector<Eigen::Triplet<cplx>> trips;
  for (int r = 0; r < box.size(); ++r) {
    const SiteIndex k = box.site(r);
    double w = 0.0;
    for (int i = 0; i < box.dim(); ++i) w += lambda_omega[i] * k.l[i];
    trips.emplace_back(r, r, cplx(0.0, w + k.a * mu[static_cast<std::size_t>(k.m)]));
  }
  SparseOp out(box.size(), box.size());
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

ToeplitzOperator read_back(const SparseOp& Mat, const LatticeBox& box, const GroupSpec& g, int H) {
  ToeplitzOperator out(g, box.dim(), box.labels() - 1);
  const Shift zero(static_cast<std::size_t>(box.dim()), 0);
  const int n = box.labels();
  for_each_shift(box.dim(), H, [&](const Shift& h) {
    const Shift lp = -h;  // row l = 0, column l' = -h
    if (box.point_index(lp) < 0) return;
    for (int p = 0; p < 2; ++p)
      for (int q = 0; q < 2; ++q)
        for (int m = 0; m < n; ++m)
          for (int mp = 0; mp < n; ++mp) {
            const cplx v = Mat.coeff(box.index(zero, m, sign_of(p)), box.index(lp, mp, sign_of(q)));
            if (v != cplx{}) out.set_entry(h, m, sign_of(p), mp, sign_of(q), v);
          }
  });
  out.drop_empty();
  return out;
}

Eigen::MatrixXcd expm_apply(const SparseOp& A, const Eigen::MatrixXcd& X, double tol) {
  Eigen::MatrixXcd sum = X;
  Eigen::MatrixXcd term = X;
  for (int k = 1; k < 200; ++k) {
    term = (A * term) / static_cast<double>(k);
    sum += term;
    if (term.cwiseAbs().maxCoeff() < tol) return sum;
  }
  throw std::runtime_error("expm_apply: Taylor series did not converge");
}

Eigen::MatrixXcd identity_columns(int size, const std::vector<int>& rows) {
  Eigen::MatrixXcd X = Eigen::MatrixXcd::Zero(size, static_cast<Eigen::Index>(rows.size()));
  for (std::size_t c = 0; c < rows.size(); ++c) X(rows[c], static_cast<Eigen::Index>(c)) = 1.0;
  return X;
}

}  // namespace kamlie
