#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "kamlie/linop.hpp"

namespace kamlie {

struct IntegratorInfo {
  double tol = 0.0;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  double min_step = 0.0;
  double max_step = 0.0;
  /// Step size underflow; the trajectory stops at the last accepted step.
  bool aborted = false;
  std::string message;
};

/// Phase-space samples h(t) in sign-major layout (a, m).
struct Trajectory {
  GroupSpec group = GroupSpec::su2();
  double s = 2.0;
  std::vector<double> times;
  std::vector<Eigen::VectorXcd> states;
  IntegratorInfo info;
};

/// dh/dt = -i (Lambda sigma_3 - eps T(lambda omega t)) h on the truncation m <= M_max.
class LinearizedField {
 public:
  LinearizedField(const NlsModel& model, double lambda);
  int size() const { return 2 * n_; }
  void apply(const Eigen::VectorXcd& h, double t, Eigen::VectorXcd& out) const;

 private:
  int n_ = 0;
  std::vector<double> omega_;
  Eigen::VectorXcd diag_;
  std::vector<Shift> shifts_;
  std::vector<Eigen::MatrixXcd> blocks_;  // i eps T_h
};

/// Dormand-Prince 5(4). The local error, in the s0 phase norm relative to
/// |h0|_{s0}, is held below tol * |dt| / |t_end - t_start|, so tol bounds the
/// accumulated error over the whole span. `samples` uniform output times
/// including both ends; t_end < t_start integrates backwards.
Trajectory evolve_linearized(const NlsModel& model, double lambda, const Eigen::VectorXcd& h0, double t_end,
                             double tol, int samples = 1000, double t_start = 0.0, double s0 = 2.0);

/// v_m(t) = e^{-i a mu_m t} v_m(0).
Eigen::VectorXcd evolve_reduced(const std::vector<double>& mu, const Eigen::VectorXcd& v0, double t);

/// (inf, sup) of |h(t)|_s / |h(0)|_s over the samples.
std::pair<double, double> stability_band(const Trajectory& traj, double s);

/// |h^- - conj(h^+)|_inf.
double pairing_defect(const Eigen::VectorXcd& h);

/// Random h with h^- = conj(h^+) and |h_m| ~ <j(m)>^{-decay}, normalised to |h|_{s0} = 1.
Eigen::VectorXcd paired_state(const GroupSpec& g, int labels, double decay, double s0, std::uint64_t seed);

/// Toeplitz operator evaluated as a phase-space matrix function of phi,
/// shifts with Frobenius norm below `drop_below` discarded.
class PhaseFunction {
 public:
  PhaseFunction() = default;
  PhaseFunction(const ToeplitzOperator& M, double drop_below = 0.0);
  Eigen::VectorXcd apply(const std::vector<double>& phi, const Eigen::VectorXcd& v) const;
  Eigen::MatrixXcd at(const std::vector<double>& phi) const;
  std::size_t shifts() const { return shifts_.size(); }

 private:
  int size_ = 0;
  std::vector<Shift> shifts_;
  std::vector<Eigen::MatrixXcd> blocks_;
};

/// h(t) = Psi(lambda omega t) v(t), v the reduced flow from Psi(0)^{-1} h0.
class ConjugatedFlow {
 public:
  ConjugatedFlow(const ToeplitzOperator& psi, const ToeplitzOperator& psi_inv, std::vector<double> mu_inf,
                 double lambda, const FrequencyDirection& f, const Eigen::VectorXcd& h0, double drop_below = 0.0);
  Eigen::VectorXcd at(double t) const;
  const Eigen::VectorXcd& v0() const { return v0_; }
  const std::vector<double>& mu() const { return mu_; }

 private:
  PhaseFunction psi_;
  std::vector<double> mu_;
  std::vector<double> omega_;
  Eigen::VectorXcd v0_;
};

/// (inf, sup) of |h(t)|_s / |h(0)|_s at `samples` uniform times on [0, t_end].
std::pair<double, double> conjugated_band(const ConjugatedFlow& flow, const GroupSpec& g, double t_end, int samples,
                                          double s);

struct FlowComparison {
  /// max_t |h_direct - h_conj|_{s0} / |h0|_{s0}.
  double max_diff = 0.0;
  /// Allowance at the worst time: residual * t + tol_factor * tol.
  double allowed_at_worst = 0.0;
  double worst_time = 0.0;
  bool passed = false;
};

FlowComparison compare_flows(const Trajectory& direct, const ConjugatedFlow& flow, double residual, double s0,
                             double tol_factor = 10.0);

/// sup over phis of |Psi(phi)^{-1} h - h|_s / |h|_s.
double transform_error(const ToeplitzOperator& psi_inv, const std::vector<std::vector<double>>& phis,
                       const Eigen::VectorXcd& h, double s);

}  // namespace kamlie
