#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "kamlie/toeplitz.hpp"

namespace kamlie {

/// <x> = max(1, x).
inline double bracket(double x) { return x > 1.0 ? x : 1.0; }

/// Lattice offset i = (h, dm): time shift and label difference m - m'.
struct Offset {
  Shift h;
  int dm = 0;
};

/// |i| = max(|h|_inf, |dm| * step).
double offset_norm(const Offset& i, const GroupSpec& g);

/// [M(i)]: sup over m - m' = dm of the spectral norm of the 2x2 sign block
/// at shift h. Zero when no pair of the truncation has that offset.
double block_profile(const ToeplitzOperator& M, const Offset& i);

/// s-decay norm: sqrt(sum_i [M(i)]^2 <i>^{2s}).
double s_norm(const ToeplitzOperator& M, double s);

/// s-decay norm of a single phase-space block (no time shift).
double s_norm(const SignBlock& B, const GroupSpec& g, double s);

/// Weighted l2 norm on the phase space, sign-major layout (a, m):
/// sum |j(m) + rho|^{2s} |v_{m,a}|^2.
double phase_norm(const Eigen::VectorXcd& v, const GroupSpec& g, double s);

/// Samples of a Lipschitz family on a uniform lambda grid.
struct ParamFamily {
  std::vector<double> lambdas;
  std::vector<ToeplitzOperator> samples;
  double grid_step = 0.0;
};

struct LipNorm {
  double sup = 0.0;
  double lip = 0.0;
  double value = 0.0;
  /// Set when the family has one sample and the Lipschitz part is undefined.
  bool single_sample = false;
};

/// sup_lambda |M|_s + gamma * max over adjacent samples |dM|_s / step.
LipNorm lip_norm(const ParamFamily& F, double s, double gamma);

/// (Pi_N M, Pi_N^perp M): entries with site distance <= N, and the rest.
std::pair<ToeplitzOperator, ToeplitzOperator> smooth_project(const ToeplitzOperator& M, double N);

/// T(phi) = sum_h M[h] e^{i h . phi}.
SignBlock phase_space_slice(const ToeplitzOperator& M, const std::vector<double>& phi);

/// Columnar dump: one line per nonzero entry "h_1 .. h_d m a m' a' re im"
/// with re/im in hexadecimal float notation, preceded by one header line.
void write_operator(std::ostream& os, const ToeplitzOperator& M);
ToeplitzOperator read_operator(std::istream& is);

}  // namespace kamlie
