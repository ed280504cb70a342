#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "kamlie/decay_norm.hpp"
#include "kamlie/toeplitz.hpp"

namespace kamlie {

enum class ForcingMode { linear_potential, cubic_at_profile };

/// f = V(phi, x) u (linear mode) or f = |u|^2 u linearised at a prescribed w.
struct ForcingSpec {
  ForcingMode mode = ForcingMode::linear_potential;
  /// V(phi, x) = sum_h potential[h](x) e^{i h . phi}.
  std::map<Shift, CentralFunction> potential;
  /// w(phi, x) = sum_{(h, m)} profile[(h, m)] e^{i h . phi} chi_m(x).
  std::map<std::pair<Shift, int>, cplx> profile;
};

struct NlsModel {
  GroupSpec group = GroupSpec::su2();
  int d = 2;
  FrequencyDirection freq;
  double mass = 1.0;
  double eps = 0.0;
  ForcingSpec forcing;
  int L_max = 12;
  int M_max = 24;
  /// Shift cap applied after compositions.
  int H_cap = 12;
};

/// chi_2 at h = 0 plus chi_1 at +-e_1, +-e_2 (coefficient 1 each).
ForcingSpec default_potential(int d, const GroupSpec& g);
/// w = delta (chi_0 + e^{i phi_1} chi_1 / 2).
ForcingSpec default_profile(int d, double delta, const GroupSpec& g);

/// Real-valuedness of V: each coefficient real and V_{-h} = conj(V_h).
bool potential_is_real(const ForcingSpec& f, double tol = 0.0);

/// Max over (h, m) of |V| or |w| coefficients weighted by <(h, m)>^s, l2-summed.
double profile_norm(const ForcingSpec& f, const GroupSpec& g, double s);

/// Lattice matrix T of the linearised vector field (without the -eps).
ToeplitzOperator build_T(const NlsModel& model);

/// mu_m = eigenvalue(m) + mass + r_m, shared by both signs.
struct DiagonalPart {
  GroupSpec group = GroupSpec::su2();
  double mass = 1.0;
  std::vector<double> r;
  int step = 0;

  int labels() const { return static_cast<int>(r.size()); }
  double mu(int m) const { return eigenvalue(m, group) + mass + r[static_cast<std::size_t>(m)]; }
  std::vector<double> mu_all() const;
};

DiagonalPart build_diagonal(const NlsModel& model);

/// R_0 = -i eps T, the remainder of the lattice operator i(omega . l) + i a mu + R_0.
ToeplitzOperator initial_remainder(const NlsModel& model);

struct HamiltonianReport {
  bool passed = true;
  /// Largest s0-norm among the four structure defects.
  double residual = 0.0;
  /// Which identity is worst: "++ vs --", "++ skew", "+- symmetric", "+- vs -+".
  std::string condition;
  Shift where_h;
  int where_m = 0;
  int where_mp = 0;
  double where_abs = 0.0;
};

/// Checks the linear Hamiltonian identities of M in the lattice form
///   M++[h] = conj(M--[-h]),  M++[h] = -conj(M++[-h])^T,
///   M+-[h] = M+-[h]^T,        M+-[h] = conj(M-+[-h]),
/// each measured in the s0 decay norm.
HamiltonianReport check_hamiltonian(const ToeplitzOperator& M, double tol, double s0);

/// Random Hamiltonian remainder R = -i sigma_3 H with iσ3R self-adjoint.
/// Entries decay like <(h, dm)>^{-decay}; shifts up to `radius`.
ToeplitzOperator random_hamiltonian(const GroupSpec& g, int d, int max_label, int radius, double scale,
                                    double decay, std::uint64_t seed);

}  // namespace kamlie
