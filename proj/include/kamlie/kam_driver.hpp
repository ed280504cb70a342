#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "kamlie/kam_step.hpp"

namespace kamlie {

struct Schedule {
  int N0 = 4;
  double growth = 1.5;
  int max_steps = 4;
  double tau = 5.0;
  double gamma = 1e-2;
  double s0 = 2.0;
  double s = 4.0;
  double series_tol = 1e-14;
  double skip_rel = 1e-13;
  /// Shift cap for compositions; <= 0 means the model's H_cap.
  int shift_cap = 0;
  /// Cuts are clipped to this; <= 0 means 2 L_max of the model.
  int diameter = 0;
  /// Accept when the final residual is below accept_rel * |R_0|_{s0}.
  double accept_rel = 1e-6;
  /// Smallness warning above this eps / gamma.
  double smallness = 0.5;

  double beta() const { return 6.0 * tau + 5.0; }
  /// ceil(N0^{growth^n}) before clipping.
  int raw_cut(int n) const;
  int cut(int n) const { return diameter > 0 ? std::min(raw_cut(n), diameter) : raw_cut(n); }
  StepParams step_params(int n) const;
  /// Fills diameter/shift_cap defaults from the model.
  Schedule resolved(const NlsModel& model) const;
};

struct LambdaRun {
  double lambda = 0.0;
  bool accepted = false;
  /// Number of completed KAM steps.
  int steps = 0;
  /// Step at which the screen or series failed; -1 when none did.
  int failed_step = -1;
  std::string reason;
  std::optional<MelnikovWitness> witness;
  std::vector<StepDiagnostics> diagnostics;
  /// |R_n|_{s0} for n = 0..steps.
  std::vector<double> residuals;
  /// r^{(n)} for n = 0..steps.
  std::vector<std::vector<double>> r_history;
  DiagonalPart final_diagonal;
  /// Kept only when requested.
  std::vector<ToeplitzOperator> chain;
  ToeplitzOperator final_remainder;
  double tail_budget = 0.0;
};

struct ReducibilityResult {
  Schedule schedule;
  std::vector<LambdaRun> runs;
  bool smallness_warning = false;
  double eps = 0.0;

  double acceptance_rate() const;
  /// max over accepted lambda and m of |r^{final}_m| / eps.
  double fitted_r_constant() const;
  /// Largest |r^{final}_m| over accepted lambda.
  double max_abs_r() const;
};

struct IterateOptions {
  /// Keep transform chains for these lambda indices (all when keep_all).
  std::vector<std::size_t> keep_chain_for;
  bool keep_all = false;
  /// 0 = KAMLIE_WORKERS or hardware concurrency.
  int workers = 0;
};

/// Uniform grid of n points on [1/2, 3/2].
std::vector<double> lambda_grid(int n);

/// Worker count from KAMLIE_WORKERS, else hardware concurrency (at least 1).
int default_workers();

LambdaRun iterate_one(const NlsModel& model, const Schedule& sched, double lambda, bool keep_chain);

ReducibilityResult iterate(const NlsModel& model, const Schedule& sched, const std::vector<double>& lambdas,
                           const IterateOptions& opt = {});

/// Psi_n = e^{-A_0} ... e^{-A_n}; with inverse = true, e^{A_n} ... e^{A_0}.
ToeplitzOperator compose_transform(const std::vector<ToeplitzOperator>& chain, bool inverse,
                                   const SeriesOptions& opt, TruncationLedger* ledger = nullptr);
/// Same, with the identity of the given shape for an empty chain.
ToeplitzOperator compose_transform(const GroupSpec& g, int d, int max_label, const std::vector<ToeplitzOperator>& chain,
                                   bool inverse, const SeriesOptions& opt, TruncationLedger* ledger = nullptr);

struct LimitEigenvalues {
  std::vector<double> mu;
  std::vector<double> r;
  /// max_m |mu^{(n)} - mu^{(n-1)}| for n = 1..steps.
  std::vector<double> certificates;
  bool converged = false;
};

/// Requires at least two completed steps.
LimitEigenvalues limit_eigenvalues(const LambdaRun& run, const GroupSpec& g, double mass);

/// r at lambda by piecewise-linear interpolation over the grid, every run
/// contributing its last completed iterate.
std::vector<double> interpolate_r(const ReducibilityResult& res, double lambda);

struct ReductionReport {
  double absolute = 0.0;
  double relative = 0.0;
  double budget = 0.0;
  bool passed = false;
  /// Worst entry of the residual.
  Shift where_h;
  int where_m = 0, where_a = 1, where_mp = 0, where_ap = 1;
};

/// Psi^{-1} (D_0 + R_0) Psi - D_inf in the convolution algebra, which is the
/// interior of any lattice box wider than the supports involved. The
/// symbol part enters through Psi^{-1} [D_0, Psi].
ReductionReport verify_reduction(const NlsModel& model, const Schedule& sched, const std::vector<ToeplitzOperator>& chain,
                                 const DiagonalPart& D_inf, double lambda, double extra_budget = 0.0);

}  // namespace kamlie
