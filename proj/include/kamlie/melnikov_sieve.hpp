#pragma once

#include <cstdint>
#include <vector>

#include "kamlie/kam_driver.hpp"

namespace kamlie {

/// lambda -> mu^inf_m(lambda) on a grid, linearly interpolated in lambda.
/// Labels beyond the stored corrections use r = 0.
struct SpectrumFamily {
  GroupSpec group = GroupSpec::su2();
  double mass = 1.0;
  std::vector<double> grid;
  std::vector<std::vector<double>> r;

  static SpectrumFamily unperturbed(const GroupSpec& g, double mass);
  static SpectrumFamily from_result(const ReducibilityResult& res, const GroupSpec& g, double mass);

  std::vector<double> r_at(double lambda) const;
  std::vector<double> mu(double lambda, int max_label) const;
  double max_abs_r() const;
};

struct SieveTuple {
  Shift l;
  int m = 0, a = 1, mp = 0, ap = 1;
  double value = 0.0;
  double threshold = 0.0;
};

struct PruneStats {
  std::size_t total = 0;
  /// |omega . l| below the gap bound.
  std::size_t small_omega = 0;
  /// a weight at or beyond 9|l|.
  std::size_t label_range = 0;
  /// |a (j + rho)^2 - a' (j' + rho)^2| > 6 |l|.
  std::size_t separation = 0;
  std::size_t examined = 0;
};

struct SieveParams {
  double tau = 5.0;
  int L_max = 8;
  int M_max = 80;
  /// Largest gamma the candidate list must serve.
  double gamma_max = 1e-2;
};

/// Candidate tuples surviving the three pruning claims, precomputed once.
class Sieve {
 public:
  Sieve(const SpectrumFamily& fam, const FrequencyDirection& f, const SieveParams& p);

  /// Lower bound on |a mu_m - a' mu_m'| over distinct pairs, any lambda.
  double gap_lower() const { return gap_lower_; }
  /// |omega . l| below this cannot resonate (at gamma_max).
  double small_omega_threshold() const { return omega_threshold_; }
  const PruneStats& stats() const { return stats_; }
  std::size_t candidates() const { return cands_.size(); }

  /// Tuples with |lambda omega . l + a mu_m - a' mu_m'| <= 2 gamma <l>^{-tau}.
  std::vector<SieveTuple> resonant(double lambda, double gamma) const;
  /// min over candidates of |divisor| <l>^tau / 2: lambda is resonant at gamma iff this is <= gamma.
  double resonance_level(double lambda) const;
  /// Whether a tuple is dropped by the claims (without evaluating it).
  bool pruned(const Shift& l, int m, int a, int mp, int ap) const;
  /// Candidate count per |l|_inf = k, k = 0..L_max.
  const std::vector<std::size_t>& candidates_by_radius() const { return by_radius_; }

 private:
  struct Cand {
    int li;
    int m, a, mp, ap;
  };
  const SpectrumFamily* fam_;
  FrequencyDirection freq_;
  SieveParams p_;
  double gap_lower_ = 0.0;
  double omega_threshold_ = 0.0;
  std::vector<Shift> ls_;
  std::vector<double> omega_l_;
  std::vector<double> weight_;  // <l>^tau
  std::vector<char> l_alive_;
  std::vector<Cand> cands_;
  std::vector<std::size_t> by_radius_;
  PruneStats stats_;
};

/// Unpruned enumeration.
std::vector<SieveTuple> resonant_brute_force(const SpectrumFamily& fam, const FrequencyDirection& f, double lambda,
                                             double gamma, double tau, int L_max, int M_max);

/// resonant_membership with pruning; stats of the claims go to *stats.
std::vector<SieveTuple> resonant_membership(double lambda, const SpectrumFamily& fam, const FrequencyDirection& f,
                                            double gamma, double tau, int L_max, int M_max,
                                            PruneStats* stats = nullptr);

struct AuditReport {
  std::size_t lambdas = 0;
  std::size_t tuples = 0;
  std::size_t pruned = 0;
  /// Pruned tuples that are resonant after all (must be 0).
  std::size_t false_prunes = 0;
  /// Same, for the literal |omega . l| < 1/3 rule.
  std::size_t literal_third_false_prunes = 0;
  std::size_t random_checks = 0;
  std::size_t random_failures = 0;
  /// Measured min |a mu - a' mu'| over distinct pairs.
  double measured_gap = 0.0;
};

AuditReport pruning_audit(const SpectrumFamily& fam, const FrequencyDirection& f, const std::vector<double>& lambdas,
                          double gamma, double tau, int L_max, int M_max, std::size_t random_checks,
                          std::uint64_t seed);

struct GammaRow {
  double gamma = 0.0;
  double fraction = 0.0;
  std::size_t resonant_samples = 0;
};

struct SieveReport {
  std::vector<GammaRow> rows;
  bool has_fit = false;
  double slope = 0.0;
  double intercept = 0.0;
  bool degenerate = false;
  PruneStats stats;
  double gap_lower = 0.0;
  double small_omega_threshold = 0.0;
  /// First resonant tuple found per gamma (when any).
  std::vector<SieveTuple> witnesses;
  /// sum over candidate tuples of 8 gamma_max <l>^{-tau}, by |l|.
  std::vector<double> tail_bound_by_radius;
};

SieveReport measure_estimate(const SpectrumFamily& fam, const FrequencyDirection& f, const std::vector<double>& gammas,
                             const std::vector<double>& lambdas, double tau, int L_max, int M_max);

/// Least squares slope/intercept of log y against log x over positive pairs.
bool loglog_fit(const std::vector<double>& x, const std::vector<double>& y, double& slope, double& intercept);

}  // namespace kamlie
