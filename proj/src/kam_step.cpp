#include "kamlie/kam_step.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace kamlie {

double small_divisor(const Shift& h, int m, int a, int mp, int ap, double lambda, const FrequencyDirection& f,
                     const DiagonalPart& D) {
  return lambda * f.dot(h) + a * D.mu(m) - ap * D.mu(mp);
}

std::string MelnikovWitness::describe() const {
  std::ostringstream os;
  os << "h=" << to_string(h) << " m=" << m << " a=" << (a > 0 ? '+' : '-') << " m'=" << mp
     << " a'=" << (ap > 0 ? '+' : '-') << " divisor=" << divisor << " threshold=" << threshold;
  return os.str();
}

ScreenResult melnikov_screen(const DiagonalPart& D, const FrequencyDirection& f, double lambda, double gamma,
                             double tau, int N) {
  ScreenResult out;
  const int n = D.labels();
  // Sorted values a' mu_m' with their (m', a').
  struct Val {
    double v;
    int m, a;
  };
  std::vector<Val> vals;
  vals.reserve(static_cast<std::size_t>(2 * n));
  const std::vector<double> mu = D.mu_all();
  for (int m = 0; m < n; ++m) {
    vals.push_back({mu[static_cast<std::size_t>(m)], m, 1});
    vals.push_back({-mu[static_cast<std::size_t>(m)], m, -1});
  }
  std::stable_sort(vals.begin(), vals.end(), [](const Val& x, const Val& y) { return x.v < y.v; });

  double best_ratio = std::numeric_limits<double>::infinity();
  out.min_divisor = std::numeric_limits<double>::infinity();
  const std::size_t per_h = static_cast<std::size_t>(2 * n) * static_cast<std::size_t>(2 * n - 1);
  for_each_shift(f.dim(), N, [&](const Shift& h) {
    const double w = lambda * f.dot(h);
    const bool zero = inf_norm(h) == 0;
    const double thr = gamma * std::pow(bracket(inf_norm(h)), -tau);
    out.checked += zero ? per_h : per_h + static_cast<std::size_t>(2 * n);
    for (int m = n - 1; m >= 0; --m)
      for (int a : {1, -1}) {
        const double x = w + a * mu[static_cast<std::size_t>(m)];
        auto it = std::lower_bound(vals.begin(), vals.end(), x, [](const Val& v, double t) { return v.v < t; });
        const std::ptrdiff_t c = it - vals.begin();
        double best = std::numeric_limits<double>::infinity();
        const Val* arg = nullptr;
        for (std::ptrdiff_t k = c - 2; k <= c + 1; ++k) {
          if (k < 0 || k >= static_cast<std::ptrdiff_t>(vals.size())) continue;
          const Val& v = vals[static_cast<std::size_t>(k)];
          if (zero && v.m == m && v.a == a) continue;
          const double dlt = std::abs(x - v.v);
          if (dlt < best) {
            best = dlt;
            arg = &v;
          }
        }
        if (!arg) continue;
        out.min_divisor = std::min(out.min_divisor, best);
        const double ratio = best / thr;
        if (ratio < best_ratio) {
          best_ratio = ratio;
          out.worst = MelnikovWitness{h, m, a, arg->m, arg->a, x - arg->v, thr};
        }
      }
  });
  out.pass = !(best_ratio < 1.0);
  return out;
}

ToeplitzOperator solve_homological(const ToeplitzOperator& R, const DiagonalPart& D, const FrequencyDirection& f,
                                   const HomologicalProblem& p) {
  ToeplitzOperator A = R.zero_like();
  const GroupSpec& g = R.group();
  const int n = R.labels();
  const std::vector<double> mu = D.mu_all();
  for (const auto& [h, b] : R.blocks()) {
    const int hn = inf_norm(h);
    if (hn > p.N) continue;
    const double w = p.lambda * f.dot(h);
    const double thr = p.gamma * std::pow(bracket(hn), -p.tau);
    SignBlock out(n);
    for (int pp = 0; pp < 2; ++pp)
      for (int q = 0; q < 2; ++q) {
        if (!b.has(pp, q)) continue;
        const int a = sign_of(pp), ap = sign_of(q);
        const auto& src = b.part(pp, q);
        Eigen::MatrixXcd* dst = nullptr;
        for (int mp = 0; mp < n; ++mp)
          for (int m = 0; m < n; ++m) {
            const cplx v = src(m, mp);
            if (v == cplx{}) continue;
            const double dist = site_distance(h, m, a, mp, ap, g);
            if (dist == 0.0 || dist > p.N) continue;
            const double delta = w + a * mu[static_cast<std::size_t>(m)] - ap * mu[static_cast<std::size_t>(mp)];
            if (!(std::abs(delta) >= thr)) throw SmallDivisorError(MelnikovWitness{h, m, a, mp, ap, delta, thr});
            if (!dst) dst = &out.part_mut(pp, q);
            (*dst)(m, mp) = v / cplx(0.0, delta);
          }
      }
    if (!out.empty()) A.block(h) = std::move(out);
  }
  return A;
}

ToeplitzOperator commutator_with_symbol(const ToeplitzOperator& A, const DiagonalPart& D,
                                        const FrequencyDirection& f, double lambda) {
  ToeplitzOperator C = A.zero_like();
  const int n = A.labels();
  const std::vector<double> mu = D.mu_all();
  for (const auto& [h, b] : A.blocks()) {
    const double w = lambda * f.dot(h);
    SignBlock out(n);
    for (int p = 0; p < 2; ++p)
      for (int q = 0; q < 2; ++q) {
        if (!b.has(p, q)) continue;
        const int a = sign_of(p), ap = sign_of(q);
        Eigen::MatrixXcd& dst = out.part_mut(p, q);
        const auto& src = b.part(p, q);
        for (int mp = 0; mp < n; ++mp)
          for (int m = 0; m < n; ++m) {
            const double delta = w + a * mu[static_cast<std::size_t>(m)] - ap * mu[static_cast<std::size_t>(mp)];
            dst(m, mp) = cplx(0.0, -delta) * src(m, mp);
          }
      }
    C.block(h) = std::move(out);
  }
  return C;
}

ToeplitzOperator diagonal_of(const ToeplitzOperator& R) {
  ToeplitzOperator out = R.zero_like();
  const Shift zero(static_cast<std::size_t>(R.dim()), 0);
  const SignBlock* b = R.find(zero);
  if (!b) return out;
  SignBlock d(R.labels());
  for (int p = 0; p < 2; ++p)
    if (b->has(p, p)) d.part_mut(p, p) = b->part(p, p).diagonal().asDiagonal();
  if (!d.empty()) out.block(zero) = std::move(d);
  return out;
}

ToeplitzOperator lie_transform(const ToeplitzOperator& R, const ToeplitzOperator& C, const ToeplitzOperator& A,
                               const SeriesOptions& opt, SeriesStats* stats) {
  ToeplitzOperator out = R;
  double ref = s_norm(R, opt.s0);
  if (ref == 0.0) ref = s_norm(C, opt.s0);
  if (ref == 0.0 || A.is_zero()) {
    out += C;
    if (stats) *stats = {C.is_zero() ? 0 : 1, s_norm(C, opt.s0)};
    return out;
  }
  ToeplitzOperator U = C + commutator(A, R, opt.compose);
  double prev = std::numeric_limits<double>::infinity();
  int stall = 0;
  for (int k = 1;; ++k) {
    out += U;
    const double t = s_norm(U, opt.s0);
    if (stats) *stats = {k, t};
    if (t < opt.tol * ref) break;
    stall = t >= prev ? stall + 1 : 0;
    if (stall >= opt.stall_limit)
      throw SeriesDivergence("Lie series terms stopped decreasing at term " + std::to_string(k));
    if (k >= opt.max_terms) throw SeriesDivergence("Lie series did not reach tolerance");
    prev = t;
    U = commutator(A, U, opt.compose);
    U *= cplx(1.0 / (k + 1));
  }
  out.drop_empty();
  return out;
}

ToeplitzOperator exp_series(const ToeplitzOperator& A, const SeriesOptions& opt, SeriesStats* stats) {
  ToeplitzOperator out = ToeplitzOperator::identity(A.group(), A.dim(), A.max_label());
  if (A.is_zero()) {
    if (stats) *stats = {0, 0.0};
    return out;
  }
  ToeplitzOperator term = out;
  double prev = std::numeric_limits<double>::infinity();
  int stall = 0;
  for (int k = 1;; ++k) {
    term = compose(A, term, opt.compose);
    term *= cplx(1.0 / k);
    out += term;
    const double t = s_norm(term, opt.s0);
    if (stats) *stats = {k, t};
    if (t < opt.tol) break;
    stall = t >= prev ? stall + 1 : 0;
    if (stall >= opt.stall_limit || k >= opt.max_terms)
      throw SeriesDivergence("exponential series did not converge at term " + std::to_string(k));
    prev = t;
  }
  out.drop_empty();
  return out;
}

Conjugated conjugate(const DiagonalPart& D, const ToeplitzOperator& R, const ToeplitzOperator& A,
                     const StepParams& p) {
  Conjugated out;
  out.D1 = D;
  out.D1.step = D.step + 1;
  StepDiagnostics& dg = out.diag;
  dg.step = D.step;
  dg.N = p.N;
  dg.R_s0 = s_norm(R, p.s0);
  dg.R_s = s_norm(R, p.s);
  dg.R_sb = s_norm(R, p.s + p.beta);

  const Shift zero(static_cast<std::size_t>(R.dim()), 0);
  if (const SignBlock* b0 = R.find(zero)) {
    for (int m = 0; m < R.labels(); ++m) {
      const cplx plus = b0->has(0, 0) ? cplx(0.0, -1.0) * b0->part(0, 0)(m, m) : cplx{};
      const cplx minus = b0->has(1, 1) ? cplx(0.0, 1.0) * b0->part(1, 1)(m, m) : cplx{};
      out.D1.r[static_cast<std::size_t>(m)] += plus.real();
      dg.eig_shift = std::max(dg.eig_shift, std::abs(plus.real()));
      dg.imag_residue = std::max(dg.imag_residue, std::abs(plus.imag()));
      dg.sign_asymmetry = std::max(dg.sign_asymmetry, std::abs(plus - minus));
    }
  }

  if (dg.R_s0 == 0.0) {
    out.R1 = R.zero_like();
    return out;
  }

  TruncationLedger ledger;
  SeriesOptions so;
  so.tol = p.series_tol;
  so.s0 = p.s0;
  so.compose.shift_cap = p.shift_cap;
  so.compose.skip_below = p.skip_rel * dg.R_s0;
  so.compose.tail_s = p.s0;
  so.compose.ledger = &ledger;

  auto [low, high] = smooth_project(R, p.N);
  ToeplitzOperator Q = diagonal_of(R) - low;
  ToeplitzOperator AR = commutator(A, R, so.compose);
  ToeplitzOperator R1 = high + AR;
  ToeplitzOperator U = Q + AR;
  double prev = std::numeric_limits<double>::infinity();
  int stall = 0;
  int k = 1;
  while (true) {
    if (k >= so.max_terms) throw SeriesDivergence("KAM conjugation series did not reach tolerance");
    U = commutator(A, U, so.compose);
    U *= cplx(1.0 / (k + 1));
    ++k;
    R1 += U;
    const double t = s_norm(U, p.s0);
    if (t < p.series_tol * dg.R_s0) break;
    stall = t >= prev ? stall + 1 : 0;
    if (stall >= so.stall_limit)
      throw SeriesDivergence("KAM conjugation terms stopped decreasing at term " + std::to_string(k));
    prev = t;
  }
  R1.drop_empty();
  dg.series_terms = k;
  dg.tail_mass = ledger.dropped_norm;
  dg.R1_s0 = s_norm(R1, p.s0);
  dg.R1_s = s_norm(R1, p.s);
  dg.R1_sb = s_norm(R1, p.s + p.beta);
  if (p.check_structure) dg.hamiltonian_residual = check_hamiltonian(R1, 0.0, p.s0).residual;
  out.R1 = std::move(R1);
  return out;
}

StepOutcome kam_single_step(const DiagonalPart& D, const ToeplitzOperator& R, const FrequencyDirection& f,
                            double lambda, const StepParams& p) {
  StepOutcome out;
  const ScreenResult scr = melnikov_screen(D, f, lambda, p.gamma, p.tau, p.N);
  if (!scr.pass) {
    out.screened = false;
    out.witness = scr.worst;
    out.D1 = D;
    out.R1 = R;
    out.A = R.zero_like();
    out.diag.step = D.step;
    out.diag.N = p.N;
    out.diag.screened = scr.checked;
    out.diag.min_divisor = scr.min_divisor;
    return out;
  }
  out.A = solve_homological(R, D, f, {lambda, p.N, p.gamma, p.tau});
  Conjugated c = conjugate(D, R, out.A, p);
  out.D1 = std::move(c.D1);
  out.R1 = std::move(c.R1);
  out.diag = c.diag;
  out.diag.screened = scr.checked;
  out.diag.min_divisor = scr.min_divisor;
  out.diag.A_s0 = s_norm(out.A, p.s0);
  out.diag.A_s = s_norm(out.A, p.s);
  return out;
}

}  // namespace kamlie
