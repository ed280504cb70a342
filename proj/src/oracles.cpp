#include "kamlie/oracles.hpp"

#include <stdexcept>

#include "kamlie/decay_norm.hpp"

namespace kamlie {

namespace {

std::vector<double> scaled(const FrequencyDirection& f, double lambda) {
  std::vector<double> w;
  for (double x : f.omega_tilde) w.push_back(lambda * x);
  return w;
}

Eigen::MatrixXcd restrict(const SparseOp& M, const std::vector<int>& rows) {
  std::vector<int> pos(static_cast<std::size_t>(M.rows()), -1);
  for (std::size_t i = 0; i < rows.size(); ++i) pos[static_cast<std::size_t>(rows[i])] = static_cast<int>(i);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(rows.size(), rows.size());
  for (std::size_t j = 0; j < rows.size(); ++j)
    for (SparseOp::InnerIterator it(M, rows[j]); it; ++it) {
      const int i = pos[static_cast<std::size_t>(it.row())];
      if (i >= 0) out(i, static_cast<Eigen::Index>(j)) = it.value();
    }
  return out;
}

Eigen::MatrixXcd restrict_rows(const Eigen::MatrixXcd& M, const std::vector<int>& rows) {
  Eigen::MatrixXcd out(rows.size(), M.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = M.row(rows[i]);
  return out;
}

}  // namespace

DenseCheck homological_residual(const ToeplitzOperator& R, const DiagonalPart& D, const FrequencyDirection& f,
                                const HomologicalProblem& p, const LatticeBox& box, int inner) {
  const ToeplitzOperator A = solve_homological(R, D, f, p);
  const SparseOp Dm = materialize_symbol(box, scaled(f, p.lambda), D.mu_all());
  const SparseOp Am = materialize(A, box);
  const SparseOp X = materialize(smooth_project(R, p.N).first, box) + SparseOp(Am * Dm - Dm * Am) -
                     materialize(diagonal_of(R), box);
  const std::vector<int> rows = box.interior_rows(inner);
  DenseCheck c;
  c.absolute = restrict(X, rows).norm();
  const double r = restrict(materialize(R, box), rows).norm();
  c.relative = r > 0.0 ? c.absolute / r : c.absolute;
  return c;
}

DenseCheck dense_conjugation(const ToeplitzOperator& R, const DiagonalPart& D, const FrequencyDirection& f,
                             double lambda, const ToeplitzOperator& A, const Conjugated& step, const LatticeBox& box,
                             int inner) {
  const std::vector<double> w = scaled(f, lambda);
  const SparseOp L = SparseOp(materialize_symbol(box, w, D.mu_all())) + materialize(R, box);
  const SparseOp Am = materialize(A, box);
  const std::vector<int> rows = box.interior_rows(inner);
  // Series terms are cut 1e-16 below the largest entry they act on.
  const Eigen::MatrixXcd right = expm_apply(-Am, identity_columns(box.size(), rows), 1e-16);
  const Eigen::MatrixXcd mid = L * right;
  const Eigen::MatrixXcd conj = restrict_rows(expm_apply(Am, mid, 1e-16 * mid.cwiseAbs().maxCoeff()), rows);

  const SparseOp L1 = SparseOp(materialize_symbol(box, w, step.D1.mu_all())) + materialize(step.R1, box);
  DenseCheck c;
  c.absolute = (conj - restrict(L1, rows)).norm();
  const double r = restrict(materialize(R, box), rows).norm();
  c.relative = r > 0.0 ? c.absolute / r : c.absolute;
  return c;
}

double screened_lambda(const DiagonalPart& D, const FrequencyDirection& f, double gamma, double tau, int N,
                       std::mt19937_64& rng, int attempts) {
  std::uniform_real_distribution<double> u(0.5, 1.5);
  for (int k = 0; k < attempts; ++k) {
    const double lambda = u(rng);
    if (melnikov_screen(D, f, lambda, gamma, tau, N).pass) return lambda;
  }
  throw std::runtime_error("screened_lambda: no admissible lambda found");
}

}  // namespace kamlie
