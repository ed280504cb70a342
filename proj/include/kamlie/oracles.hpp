#pragma once

#include <cstdint>
#include <random>

#include "kamlie/kam_step.hpp"
#include "kamlie/materialize.hpp"

namespace kamlie {

/// Dense-matrix checks of the convolution-algebra KAM step on a finite
/// lattice box, measured on the rows and columns with |l| <= inner.
struct DenseCheck {
  double absolute = 0.0;
  /// absolute / |R| on the same block (Frobenius).
  double relative = 0.0;
};

/// Pi_N R + [A, D] - diag R with every factor materialised.
DenseCheck homological_residual(const ToeplitzOperator& R, const DiagonalPart& D, const FrequencyDirection& f,
                                const HomologicalProblem& p, const LatticeBox& box, int inner);

/// e^A (D + R) e^{-A} by Taylor series on the box against D1 + R1 from the
/// convolution step.
DenseCheck dense_conjugation(const ToeplitzOperator& R, const DiagonalPart& D, const FrequencyDirection& f,
                             double lambda, const ToeplitzOperator& A, const Conjugated& step, const LatticeBox& box,
                             int inner);

/// Uniform draws on [1/2, 3/2] until the screen at (gamma, tau, N) passes.
double screened_lambda(const DiagonalPart& D, const FrequencyDirection& f, double gamma, double tau, int N,
                       std::mt19937_64& rng, int attempts = 1000);

}  // namespace kamlie
