#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

#include "kamlie/linop.hpp"

namespace kamlie {

/// lambda omega . h + a mu_m - a' mu_m'.
double small_divisor(const Shift& h, int m, int a, int mp, int ap, double lambda, const FrequencyDirection& f,
                     const DiagonalPart& D);

struct MelnikovWitness {
  Shift h;
  int m = 0, a = 1, mp = 0, ap = 1;
  double divisor = 0.0;
  double threshold = 0.0;
  std::string describe() const;
};

struct ScreenResult {
  bool pass = true;
  /// Tuple with the smallest |divisor| <h>^tau; set whenever a tuple exists.
  std::optional<MelnikovWitness> worst;
  std::size_t checked = 0;
  double min_divisor = 0.0;
};

/// |small_divisor| >= gamma <h>^{-tau} for |h|_inf <= N and (m, a) != (m', a').
ScreenResult melnikov_screen(const DiagonalPart& D, const FrequencyDirection& f, double lambda, double gamma,
                             double tau, int N);

/// Thrown when the homological equation meets a divisor the screen should have excluded.
class SmallDivisorError : public std::runtime_error {
 public:
  explicit SmallDivisorError(MelnikovWitness w)
      : std::runtime_error("small divisor below threshold at " + w.describe()), witness(std::move(w)) {}
  MelnikovWitness witness;
};

struct HomologicalProblem {
  double lambda = 1.0;
  int N = 4;
  double gamma = 1e-2;
  double tau = 5.0;
};

/// A = R / (i delta) on 0 < dist <= N, zero elsewhere.
ToeplitzOperator solve_homological(const ToeplitzOperator& R, const DiagonalPart& D, const FrequencyDirection& f,
                                   const HomologicalProblem& p);

/// [A, D] for the diagonal symbol D = i(lambda omega . l + a mu_m): entries -i delta A.
ToeplitzOperator commutator_with_symbol(const ToeplitzOperator& A, const DiagonalPart& D,
                                        const FrequencyDirection& f, double lambda);

/// Entries with site distance 0 (h = 0, same m and sign).
ToeplitzOperator diagonal_of(const ToeplitzOperator& R);

struct SeriesOptions {
  /// Stop once a term's s0-norm falls below tol * reference.
  double tol = 1e-14;
  double s0 = 2.0;
  int max_terms = 80;
  /// Terms whose norms fail to decrease this many times in a row abort.
  int stall_limit = 3;
  ComposeOptions compose;
};

struct SeriesStats {
  int terms = 0;
  double last_term = 0.0;
};

class SeriesDivergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// e^{ad A} applied to D + R, minus D, given C = [A, D]:
///   R + sum_{k >= 1} U_k,  U_1 = C + [A, R],  U_{k+1} = [A, U_k] / (k + 1).
ToeplitzOperator lie_transform(const ToeplitzOperator& R, const ToeplitzOperator& C, const ToeplitzOperator& A,
                               const SeriesOptions& opt, SeriesStats* stats = nullptr);

/// e^{A} as a Toeplitz operator, by its power series.
ToeplitzOperator exp_series(const ToeplitzOperator& A, const SeriesOptions& opt, SeriesStats* stats = nullptr);

struct StepParams {
  int N = 4;
  double gamma = 1e-2;
  double tau = 5.0;
  double s0 = 2.0;
  double s = 4.0;
  double beta = 35.0;
  double series_tol = 1e-14;
  /// Block pairs below skip_rel * |R|_{s0} (Frobenius product) are not multiplied.
  double skip_rel = 1e-17;
  int shift_cap = 12;
  bool check_structure = true;
};

struct StepDiagnostics {
  int step = 0;
  int N = 0;
  double R_s0 = 0.0, R_s = 0.0, R_sb = 0.0;
  double R1_s0 = 0.0, R1_s = 0.0, R1_sb = 0.0;
  double A_s0 = 0.0, A_s = 0.0;
  std::size_t screened = 0;
  double min_divisor = 0.0;
  double tail_mass = 0.0;
  double hamiltonian_residual = 0.0;
  /// max_m |r^{(n+1)}_m - r^{(n)}_m|
  double eig_shift = 0.0;
  /// Imaginary part of the diagonal correction that was projected out.
  double imag_residue = 0.0;
  /// Mismatch between the + and - sign corrections.
  double sign_asymmetry = 0.0;
  int series_terms = 0;
};

struct Conjugated {
  DiagonalPart D1;
  ToeplitzOperator R1;
  StepDiagnostics diag;
};

/// e^{A} (D + R) e^{-A} for A solving the homological equation at cut N.
Conjugated conjugate(const DiagonalPart& D, const ToeplitzOperator& R, const ToeplitzOperator& A,
                     const StepParams& p);

struct StepOutcome {
  bool screened = true;
  std::optional<MelnikovWitness> witness;
  DiagonalPart D1;
  ToeplitzOperator R1;
  ToeplitzOperator A;
  StepDiagnostics diag;
};

/// screen -> solve_homological -> conjugate.
StepOutcome kam_single_step(const DiagonalPart& D, const ToeplitzOperator& R, const FrequencyDirection& f,
                            double lambda, const StepParams& p);

}  // namespace kamlie
