#pragma once

#include <complex>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "kamlie/lattice.hpp"

namespace kamlie {

using cplx = std::complex<double>;

/// Finite character expansion b = sum_m b_m chi_m of a central function.
struct CentralFunction {
  std::map<int, cplx> coeffs;
  GroupSpec group = GroupSpec::su2();

  int max_label() const { return coeffs.empty() ? 0 : coeffs.rbegin()->first; }
  bool is_real(double tol = 0.0) const;
  cplx coeff(int m) const;
};

/// Product of two expansions via the character multiplication rule.
CentralFunction multiply(const CentralFunction& b, const CentralFunction& c);

/// (j(m) + rho)^2 - rho^2, the eigenvalue of -Delta on the character chi_m.
double eigenvalue(int m, const GroupSpec& g);

/// Labels c with chi_c appearing in chi_h * chi_m, in decreasing order.
///
/// SU(2): {h + m - 2k : k = 0..min(h, m)}. For SO(3) the labels are
/// translated to even SU(2) labels and back, which gives |h - m|..h + m.
std::vector<int> char_product(int h, int m, const GroupSpec& g = GroupSpec::su2());

/// Matrix of u -> b u on chi_0..chi_M (symmetric when b is real).
///
/// Entry [m][m'] sums b_h over all h with chi_m in chi_h chi_m'. Throws
/// std::invalid_argument when the support of b exceeds 2 M, since such
/// coefficients cannot be represented without aliasing at the cut.
Eigen::MatrixXcd multiplication_matrix(const CentralFunction& b, int max_label);

struct DecayProfile {
  bool exact_band = false;
  int band_width = 0;
  double exponent = 0.0;
  double log_constant = 0.0;
  int samples = 0;
};

/// Least-squares fit of log max_{m-m'=k} |B[m][m']| against -log(k step),
/// using only the classes with k step >= 1 when there are at least two.
/// Fewer than two nonzero off-diagonal classes is reported as an exact band.
DecayProfile decay_profile(const Eigen::MatrixXcd& B, const GroupSpec& g);

}  // namespace kamlie
