#include "kamlie/linop.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace kamlie {

namespace {

using TrigCentral = std::map<Shift, CentralFunction>;

Shift unit(int d, int i) {
  Shift e(static_cast<std::size_t>(d), 0);
  e[static_cast<std::size_t>(i)] = 1;
  return e;
}

TrigCentral trig_multiply(const TrigCentral& a, const TrigCentral& b, const GroupSpec& g) {
  TrigCentral out;
  for (const auto& [ha, fa] : a)
    for (const auto& [hb, fb] : b) {
      const CentralFunction p = multiply(fa, fb);
      auto [it, fresh] = out.try_emplace(ha + hb);
      if (fresh) it->second.group = g;
      for (const auto& [m, c] : p.coeffs) it->second.coeffs[m] += c;
    }
  return out;
}

TrigCentral profile_function(const ForcingSpec& f, const GroupSpec& g, bool conjugate) {
  TrigCentral out;
  for (const auto& [key, c] : f.profile) {
    const Shift h = conjugate ? -key.first : key.first;
    auto [it, fresh] = out.try_emplace(h);
    if (fresh) it->second.group = g;
    it->second.coeffs[key.second] += conjugate ? std::conj(c) : c;
  }
  return out;
}

void put(ToeplitzOperator& T, const Shift& h, int p, int q, const Eigen::MatrixXcd& B) {
  if (B.cwiseAbs().maxCoeff() == 0.0) return;
  T.block(h).part_mut(p, q) += B;
}

// Lattice-level Hermitian transpose partner: X[h] paired with X[-h].
const Eigen::MatrixXcd* part_or_null(const ToeplitzOperator& M, const Shift& h, int p, int q) {
  const SignBlock* b = M.find(h);
  return (b && b->has(p, q)) ? &b->part(p, q) : nullptr;
}

}  // namespace

ForcingSpec default_potential(int d, const GroupSpec& g) {
  ForcingSpec f;
  f.mode = ForcingMode::linear_potential;
  CentralFunction c2{{{2, 1.0}}, g};
  CentralFunction c1{{{1, 1.0}}, g};
  f.potential[Shift(static_cast<std::size_t>(d), 0)] = c2;
  for (int i = 0; i < std::min(d, 2); ++i) {
    f.potential[unit(d, i)] = c1;
    f.potential[-unit(d, i)] = c1;
  }
  return f;
}

ForcingSpec default_profile(int d, double delta, const GroupSpec& g) {
  (void)g;
  ForcingSpec f;
  f.mode = ForcingMode::cubic_at_profile;
  f.profile[{Shift(static_cast<std::size_t>(d), 0), 0}] = delta;
  f.profile[{unit(d, 0), 1}] = 0.5 * delta;
  return f;
}

bool potential_is_real(const ForcingSpec& f, double tol) {
  for (const auto& [h, c] : f.potential) {
    if (!c.is_real(tol)) return false;
    auto it = f.potential.find(-h);
    const int top = std::max(c.max_label(), it == f.potential.end() ? 0 : it->second.max_label());
    for (int m = 0; m <= top; ++m) {
      const cplx other = it == f.potential.end() ? cplx{} : it->second.coeff(m);
      if (std::abs(c.coeff(m) - std::conj(other)) > tol) return false;
    }
  }
  return true;
}

double profile_norm(const ForcingSpec& f, const GroupSpec& g, double s) {
  double sum = 0.0;
  auto add = [&](const Shift& h, int m, cplx c) {
    const double w = bracket(std::max(static_cast<double>(inf_norm(h)), sobolev_weight(m, g)));
    sum += std::norm(c) * std::pow(w, 2.0 * s);
  };
  if (f.mode == ForcingMode::linear_potential) {
    for (const auto& [h, c] : f.potential)
      for (const auto& [m, v] : c.coeffs) add(h, m, v);
  } else {
    for (const auto& [key, v] : f.profile) add(key.first, key.second, v);
  }
  return std::sqrt(sum);
}

ToeplitzOperator build_T(const NlsModel& model) {
  ToeplitzOperator T(model.group, model.d, model.M_max);
  const int M = model.M_max;
  if (model.forcing.mode == ForcingMode::linear_potential) {
    for (const auto& [h, V] : model.forcing.potential) {
      if (static_cast<int>(h.size()) != model.d) throw std::invalid_argument("build_T: potential shift dimension");
      const Eigen::MatrixXcd B = multiplication_matrix(V, M);
      put(T, h, 0, 0, B);
      put(T, h, 1, 1, -B);
    }
  } else {
    const TrigCentral w = profile_function(model.forcing, model.group, false);
    const TrigCentral wbar = profile_function(model.forcing, model.group, true);
    for (const auto& [h, c] : w)
      if (static_cast<int>(h.size()) != model.d) throw std::invalid_argument("build_T: profile shift dimension");
    const TrigCentral mod2 = trig_multiply(w, wbar, model.group);
    const TrigCentral w2 = trig_multiply(w, w, model.group);
    const TrigCentral wbar2 = trig_multiply(wbar, wbar, model.group);
    for (const auto& [h, f] : mod2) {
      const Eigen::MatrixXcd B = multiplication_matrix(f, M);
      put(T, h, 0, 0, 2.0 * B);
      put(T, h, 1, 1, -2.0 * B);
    }
    for (const auto& [h, f] : w2) put(T, h, 0, 1, -multiplication_matrix(f, M));
    for (const auto& [h, f] : wbar2) put(T, h, 1, 0, multiplication_matrix(f, M));
  }
  T.drop_empty();
  return T;
}

std::vector<double> DiagonalPart::mu_all() const {
  std::vector<double> out(r.size());
  for (int m = 0; m < labels(); ++m) out[static_cast<std::size_t>(m)] = mu(m);
  return out;
}

DiagonalPart build_diagonal(const NlsModel& model) {
  DiagonalPart D;
  D.group = model.group;
  D.mass = model.mass;
  D.r.assign(static_cast<std::size_t>(model.M_max + 1), 0.0);
  return D;
}

ToeplitzOperator initial_remainder(const NlsModel& model) {
  ToeplitzOperator R = build_T(model);
  R *= cplx(0.0, -model.eps);
  if (model.eps == 0.0) R = R.zero_like();
  return R;
}

HamiltonianReport check_hamiltonian(const ToeplitzOperator& M, double tol, double s0) {
  HamiltonianReport rep;
  const int n = M.labels();
  const Eigen::MatrixXcd zero = Eigen::MatrixXcd::Zero(n, n);
  auto get = [&](const Shift& h, int p, int q) -> const Eigen::MatrixXcd& {
    const Eigen::MatrixXcd* x = part_or_null(M, h, p, q);
    return x ? *x : zero;
  };

  const char* names[4] = {"++ vs --", "++ skew", "+- symmetric", "+- vs -+"};
  std::array<ToeplitzOperator, 4> defects;
  for (auto& d : defects) d = M.zero_like();

  std::vector<Shift> shifts;
  for (const auto& [h, b] : M.blocks()) {
    shifts.push_back(h);
    shifts.push_back(-h);
  }
  std::sort(shifts.begin(), shifts.end());
  shifts.erase(std::unique(shifts.begin(), shifts.end()), shifts.end());

  for (const Shift& h : shifts) {
    const Shift mh = -h;
    const Eigen::MatrixXcd e0 = get(h, 0, 0) - get(mh, 1, 1).conjugate();
    const Eigen::MatrixXcd e1 = get(h, 0, 0) + get(mh, 0, 0).adjoint();
    const Eigen::MatrixXcd e2 = get(h, 0, 1) - get(h, 0, 1).transpose();
    const Eigen::MatrixXcd e3 = get(h, 0, 1) - get(mh, 1, 0).conjugate();
    const Eigen::MatrixXcd* es[4] = {&e0, &e1, &e2, &e3};
    for (int c = 0; c < 4; ++c) {
      if (es[c]->cwiseAbs().maxCoeff() == 0.0) continue;
      defects[static_cast<std::size_t>(c)].block(h).part_mut(0, 0) = *es[c];
    }
  }

  int worst = -1;
  for (int c = 0; c < 4; ++c) {
    const double v = s_norm(defects[static_cast<std::size_t>(c)], s0);
    if (v > rep.residual) {
      rep.residual = v;
      worst = c;
    }
  }
  if (worst >= 0) {
    rep.condition = names[worst];
    for (const auto& [h, b] : defects[static_cast<std::size_t>(worst)].blocks()) {
      Eigen::Index i, j;
      const double v = b.part(0, 0).cwiseAbs().maxCoeff(&i, &j);
      if (v > rep.where_abs) {
        rep.where_abs = v;
        rep.where_h = h;
        rep.where_m = static_cast<int>(i);
        rep.where_mp = static_cast<int>(j);
      }
    }
  }
  rep.passed = rep.residual <= tol;
  return rep;
}

ToeplitzOperator random_hamiltonian(const GroupSpec& g, int d, int max_label, int radius, double scale,
                                    double decay, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  const int n = max_label + 1;
  auto weight = [&](const Shift& h, int m, int mp) {
    const double dist = std::max(static_cast<double>(inf_norm(h)), std::abs(m - mp) * g.label_step);
    return std::pow(1.0 + dist, -decay);
  };
  auto draw = [&](const Shift& h) {
    Eigen::MatrixXcd X(n, n);
    for (int m = 0; m < n; ++m)
      for (int mp = 0; mp < n; ++mp) X(m, mp) = scale * weight(h, m, mp) * cplx(nd(rng), nd(rng));
    return X;
  };

  std::map<Shift, Eigen::MatrixXcd> P, Q;
  const Shift zero(static_cast<std::size_t>(d), 0);
  for_each_shift(d, radius, [&](const Shift& h) {
    if (h < zero) return;
    Eigen::MatrixXcd X = draw(h);
    if (h == zero) {
      P[h] = 0.5 * (X + X.adjoint());
    } else {
      P[h] = X;
      P[-h] = X.adjoint();
    }
  });
  for_each_shift(d, radius, [&](const Shift& h) {
    Eigen::MatrixXcd X = draw(h);
    Q[h] = 0.5 * (X + X.transpose());
  });

  // H = [[P, Q], [Q^*, conj P]] in lattice form; R = -i sigma_3 H.
  ToeplitzOperator R(g, d, max_label);
  const cplx mi(0.0, -1.0), pi(0.0, 1.0);
  for (const auto& [h, p] : P) {
    SignBlock& b = R.block(h);
    b.part_mut(0, 0) = mi * p;
    b.part_mut(1, 1) = pi * P[-h].conjugate();
    b.part_mut(0, 1) = mi * Q[h];
    b.part_mut(1, 0) = pi * Q[-h].conjugate();
  }
  return R;
}

}  // namespace kamlie
