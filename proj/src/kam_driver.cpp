#include "kamlie/kam_driver.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <thread>

namespace kamlie {

int Schedule::raw_cut(int n) const {
  return static_cast<int>(std::ceil(std::pow(static_cast<double>(N0), std::pow(growth, n)) - 1e-9));
}

StepParams Schedule::step_params(int n) const {
  StepParams p;
  p.N = cut(n);
  p.gamma = gamma;
  p.tau = tau;
  p.s0 = s0;
  p.s = s;
  p.beta = beta();
  p.series_tol = series_tol;
  p.skip_rel = skip_rel;
  p.shift_cap = shift_cap;
  return p;
}

Schedule Schedule::resolved(const NlsModel& model) const {
  Schedule out = *this;
  if (out.shift_cap <= 0) out.shift_cap = model.H_cap;
  if (out.diameter <= 0) out.diameter = 2 * model.L_max;
  return out;
}

double ReducibilityResult::acceptance_rate() const {
  if (runs.empty()) return 0.0;
  std::size_t k = 0;
  for (const auto& r : runs) k += r.accepted ? 1 : 0;
  return static_cast<double>(k) / static_cast<double>(runs.size());
}

double ReducibilityResult::max_abs_r() const {
  double m = 0.0;
  for (const auto& run : runs)
    if (run.accepted)
      for (double r : run.final_diagonal.r) m = std::max(m, std::abs(r));
  return m;
}

double ReducibilityResult::fitted_r_constant() const { return eps > 0.0 ? max_abs_r() / eps : 0.0; }

std::vector<double> lambda_grid(int n) {
  if (n < 1) throw std::invalid_argument("lambda_grid: need at least one point");
  if (n == 1) return {1.0};
  std::vector<double> g(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = 0.5 + static_cast<double>(i) / (n - 1);
  return g;
}

int default_workers() {
  if (const char* env = std::getenv("KAMLIE_WORKERS")) {
    const int w = std::atoi(env);
    if (w > 0) return w;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

LambdaRun iterate_one(const NlsModel& model, const Schedule& sched_in, double lambda, bool keep_chain) {
  const Schedule sched = sched_in.resolved(model);
  LambdaRun run;
  run.lambda = lambda;
  DiagonalPart D = build_diagonal(model);
  ToeplitzOperator R = initial_remainder(model);
  const double R0 = s_norm(R, sched.s0);
  run.residuals.push_back(R0);
  run.r_history.push_back(D.r);

  for (int n = 0; n < sched.max_steps; ++n) {
    const StepParams p = sched.step_params(n);
    StepOutcome out;
    if (R.is_zero()) {
      // Nothing to divide: A = 0 and the step is the identity.
      out.D1 = D;
      out.D1.step = D.step + 1;
      out.R1 = R;
      out.A = R.zero_like();
      out.diag.step = n;
      out.diag.N = p.N;
    } else {
      try {
        out = kam_single_step(D, R, model.freq, lambda, p);
      } catch (const SeriesDivergence& e) {
        run.failed_step = n;
        run.reason = std::string("series: ") + e.what();
        break;
      } catch (const SmallDivisorError& e) {
        run.failed_step = n;
        run.reason = "divisor";
        run.witness = e.witness;
        break;
      }
      if (!out.screened) {
        run.failed_step = n;
        run.reason = "melnikov";
        run.witness = out.witness;
        break;
      }
    }
    run.diagnostics.push_back(out.diag);
    run.tail_budget += out.diag.tail_mass;
    D = std::move(out.D1);
    R = std::move(out.R1);
    run.residuals.push_back(s_norm(R, sched.s0));
    run.r_history.push_back(D.r);
    if (keep_chain) run.chain.push_back(std::move(out.A));
    ++run.steps;
  }
  run.final_diagonal = D;
  if (run.steps == sched.max_steps) {
    run.accepted = R0 == 0.0 || run.residuals.back() <= sched.accept_rel * R0;
    if (!run.accepted) run.reason = "residual";
  }
  if (keep_chain) run.final_remainder = std::move(R);
  return run;
}

ReducibilityResult iterate(const NlsModel& model, const Schedule& sched, const std::vector<double>& lambdas,
                           const IterateOptions& opt) {
  ReducibilityResult res;
  res.schedule = sched.resolved(model);
  res.eps = model.eps;
  res.smallness_warning = sched.gamma > 0.0 && model.eps / sched.gamma > sched.smallness;
  res.runs.resize(lambdas.size());
  std::vector<char> keep(lambdas.size(), opt.keep_all ? 1 : 0);
  for (std::size_t i : opt.keep_chain_for)
    if (i < keep.size()) keep[i] = 1;

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < lambdas.size(); i = next++)
      res.runs[i] = iterate_one(model, sched, lambdas[i], keep[i] != 0);
  };
  const int workers = std::max(1, std::min<int>(opt.workers > 0 ? opt.workers : default_workers(),
                                                static_cast<int>(lambdas.size())));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return res;
}

ToeplitzOperator compose_transform(const std::vector<ToeplitzOperator>& chain, bool inverse,
                                   const SeriesOptions& opt_in, TruncationLedger* ledger) {
  if (chain.empty()) throw std::invalid_argument("compose_transform: use the identity for an empty chain");
  SeriesOptions opt = opt_in;
  if (ledger) opt.compose.ledger = ledger;
  const ToeplitzOperator& a0 = chain.front();
  ToeplitzOperator psi = ToeplitzOperator::identity(a0.group(), a0.dim(), a0.max_label());
  for (const ToeplitzOperator& A : chain) {
    const ToeplitzOperator phi = exp_series(inverse ? A : cplx(-1.0) * A, opt);
    psi = inverse ? compose(phi, psi, opt.compose) : compose(psi, phi, opt.compose);
  }
  return psi;
}

ToeplitzOperator compose_transform(const GroupSpec& g, int d, int max_label, const std::vector<ToeplitzOperator>& chain,
                                   bool inverse, const SeriesOptions& opt, TruncationLedger* ledger) {
  if (chain.empty()) return ToeplitzOperator::identity(g, d, max_label);
  return compose_transform(chain, inverse, opt, ledger);
}

LimitEigenvalues limit_eigenvalues(const LambdaRun& run, const GroupSpec& g, double mass) {
  if (run.steps < 2) throw std::invalid_argument("limit_eigenvalues: needs at least two completed steps");
  LimitEigenvalues out;
  out.r = run.r_history.back();
  out.mu.resize(out.r.size());
  for (std::size_t m = 0; m < out.r.size(); ++m) out.mu[m] = eigenvalue(static_cast<int>(m), g) + mass + out.r[m];
  for (std::size_t n = 1; n < run.r_history.size(); ++n) {
    double c = 0.0;
    for (std::size_t m = 0; m < out.r.size(); ++m) c = std::max(c, std::abs(run.r_history[n][m] - run.r_history[n - 1][m]));
    out.certificates.push_back(c);
  }
  out.converged = true;
  for (std::size_t k = 1; k < out.certificates.size(); ++k) {
    const double a = out.certificates[k - 1], b = out.certificates[k];
    if (!(b < a || (a == 0.0 && b == 0.0))) out.converged = false;
  }
  return out;
}

std::vector<double> interpolate_r(const ReducibilityResult& res, double lambda) {
  if (res.runs.empty()) throw std::invalid_argument("interpolate_r: empty result");
  const auto& runs = res.runs;
  if (lambda <= runs.front().lambda) return runs.front().r_history.back();
  if (lambda >= runs.back().lambda) return runs.back().r_history.back();
  std::size_t i = 1;
  while (runs[i].lambda < lambda) ++i;
  const auto& lo = runs[i - 1];
  const auto& hi = runs[i];
  const double t = (lambda - lo.lambda) / (hi.lambda - lo.lambda);
  std::vector<double> out(lo.r_history.back().size());
  for (std::size_t m = 0; m < out.size(); ++m)
    out[m] = (1.0 - t) * lo.r_history.back()[m] + t * hi.r_history.back()[m];
  return out;
}

ReductionReport verify_reduction(const NlsModel& model, const Schedule& sched_in,
                                 const std::vector<ToeplitzOperator>& chain, const DiagonalPart& D_inf, double lambda,
                                 double extra_budget) {
  const Schedule sched = sched_in.resolved(model);
  ReductionReport rep;
  const DiagonalPart D0 = build_diagonal(model);
  const ToeplitzOperator R0 = initial_remainder(model);
  const double r0 = s_norm(R0, sched.s0);

  TruncationLedger ledger;
  SeriesOptions so;
  so.tol = sched.series_tol;
  so.s0 = sched.s0;
  so.compose.shift_cap = sched.shift_cap;
  so.compose.skip_below = sched.skip_rel * r0;
  so.compose.tail_s = sched.s0;
  so.compose.ledger = &ledger;

  ToeplitzOperator X = R0.zero_like();
  double scale = r0;
  if (!chain.empty()) {
    const ToeplitzOperator psi = compose_transform(chain, false, so);
    const ToeplitzOperator psi_inv = compose_transform(chain, true, so);
    const ToeplitzOperator C = cplx(-1.0) * commutator_with_symbol(psi, D0, model.freq, lambda);
    X = compose(psi_inv, C + compose(R0, psi, so.compose), so.compose);
    scale = s_norm(psi_inv, sched.s0) * (s_norm(C, sched.s0) + r0 * s_norm(psi, sched.s0));
  } else {
    X = R0;
  }
  const Shift zero(static_cast<std::size_t>(model.d), 0);
  for (int m = 0; m < D_inf.labels(); ++m) {
    const double r = D_inf.r[static_cast<std::size_t>(m)];
    if (r == 0.0) continue;
    X.add_entry(zero, m, 1, m, 1, cplx(0.0, -r));
    X.add_entry(zero, m, -1, m, -1, cplx(0.0, r));
  }
  X.drop_empty();

  rep.absolute = s_norm(X, sched.s0);
  rep.relative = r0 > 0.0 ? rep.absolute / r0 : rep.absolute;
  // Rounding in the cancelling products is of order machine epsilon times
  // the sizes of the factors.
  const double roundoff = 1e3 * std::numeric_limits<double>::epsilon() * scale;
  rep.budget = ledger.dropped_norm + extra_budget + sched.series_tol * r0 + roundoff;
  rep.passed = rep.absolute <= rep.budget;

  double best = -1.0;
  for (const auto& [h, b] : X.blocks())
    for (int p = 0; p < 2; ++p)
      for (int q = 0; q < 2; ++q) {
        if (!b.has(p, q)) continue;
        Eigen::Index i, j;
        const double v = b.part(p, q).cwiseAbs().maxCoeff(&i, &j);
        if (v > best) {
          best = v;
          rep.where_h = h;
          rep.where_m = static_cast<int>(i);
          rep.where_a = sign_of(p);
          rep.where_mp = static_cast<int>(j);
          rep.where_ap = sign_of(q);
        }
      }
  return rep;
}

}  // namespace kamlie
