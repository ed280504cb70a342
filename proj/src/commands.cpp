#include "kamlie/commands.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <random>

#include "kamlie/decay_norm.hpp"
#include "kamlie/melnikov_sieve.hpp"
#include "kamlie/oracles.hpp"
#include "kamlie/report.hpp"
#include "kamlie/stability.hpp"

namespace kamlie {

namespace fs = std::filesystem;

namespace {

class MissingArtifacts : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string str(int x) { return std::to_string(x); }
std::string str(std::size_t x) { return std::to_string(x); }
std::string flag(bool b) { return b ? "1" : "0"; }

std::string transform_file(int ie, int ig, int n) {
  return "transform_e" + str(ie) + "_g" + str(ig) + "_" + str(n) + ".op";
}

SeriesOptions series_options(const Schedule& s, double r0, TruncationLedger* ledger = nullptr) {
  SeriesOptions so;
  so.tol = s.series_tol;
  so.s0 = s.s0;
  so.compose.shift_cap = s.shift_cap;
  so.compose.skip_below = s.skip_rel * r0;
  so.compose.tail_s = s.s0;
  so.compose.ledger = ledger;
  return so;
}

/// Nearest accepted index to `want`, lower index on ties; -1 when none.
int nearest_accepted(const ReducibilityResult& res, int want) {
  const int n = static_cast<int>(res.runs.size());
  for (int k = 0; k < n; ++k)
    for (int i : {want - k, want + k})
      if (i >= 0 && i < n && res.runs[static_cast<std::size_t>(i)].accepted) return i;
  return -1;
}

IterateOptions iterate_options(const RunConfig& c) {
  IterateOptions o;
  o.workers = c.workers;
  return o;
}

fs::path require_reduction(const RunConfig& c) {
  const fs::path dir = run_directory(c, false);
  if (!fs::exists(dir / "summary.csv") || !fs::exists(dir / "eigenvalues.csv"))
    throw MissingArtifacts("no reduction artifacts in " + dir.string() + "; run `kamlie reduce` with this config first");
  return dir;
}

struct ProbeRecord {
  int index = -1;
  double lambda = 0.0;
  int steps = 0;
  double verify_abs = 0.0;
  std::vector<double> r;
};

ProbeRecord read_probe(const fs::path& dir, int ie, int ig) {
  const CsvTable sum = read_csv(dir / "summary.csv");
  ProbeRecord p;
  bool found = false;
  for (const auto& row : sum.rows) {
    if (std::stoi(row[static_cast<std::size_t>(sum.column("eps_index"))]) != ie ||
        std::stoi(row[static_cast<std::size_t>(sum.column("gamma_index"))]) != ig)
      continue;
    p.index = std::stoi(row[static_cast<std::size_t>(sum.column("probe_index"))]);
    p.lambda = std::stod(row[static_cast<std::size_t>(sum.column("probe_lambda"))]);
    p.steps = std::stoi(row[static_cast<std::size_t>(sum.column("probe_steps"))]);
    p.verify_abs = std::stod(row[static_cast<std::size_t>(sum.column("verify_abs"))]);
    found = true;
  }
  if (!found || p.index < 0) throw MissingArtifacts("no accepted probe transform recorded in " + dir.string());
  const CsvTable eig = read_csv(dir / "eigenvalues.csv");
  for (const auto& row : eig.rows) {
    if (std::stoi(row[static_cast<std::size_t>(eig.column("eps_index"))]) != ie ||
        std::stoi(row[static_cast<std::size_t>(eig.column("gamma_index"))]) != ig ||
        std::stoi(row[static_cast<std::size_t>(eig.column("index"))]) != p.index)
      continue;
    p.r.push_back(std::stod(row[static_cast<std::size_t>(eig.column("r"))]));
  }
  return p;
}

std::vector<ToeplitzOperator> read_chain(const fs::path& dir, int ie, int ig, int steps) {
  std::vector<ToeplitzOperator> chain;
  for (int n = 0; n < steps; ++n) {
    const fs::path f = dir / transform_file(ie, ig, n);
    std::ifstream in(f);
    if (!in) throw MissingArtifacts("missing " + f.string() + "; run `kamlie reduce` with this config first");
    chain.push_back(read_operator(in));
  }
  return chain;
}

SpectrumFamily family_from(const fs::path& dir, const GroupSpec& g, double mass) {
  const CsvTable eig = read_csv(dir / "eigenvalues.csv");
  SpectrumFamily fam;
  fam.group = g;
  fam.mass = mass;
  int last = -1;
  for (const auto& row : eig.rows) {
    if (row[static_cast<std::size_t>(eig.column("eps_index"))] != "0" ||
        row[static_cast<std::size_t>(eig.column("gamma_index"))] != "0")
      continue;
    const int idx = std::stoi(row[static_cast<std::size_t>(eig.column("index"))]);
    if (idx != last) {
      fam.grid.push_back(std::stod(row[static_cast<std::size_t>(eig.column("lambda"))]));
      fam.r.emplace_back();
      last = idx;
    }
    fam.r.back().push_back(std::stod(row[static_cast<std::size_t>(eig.column("r"))]));
  }
  return fam;
}

std::vector<std::vector<double>> torus_samples(int d, int per_axis) {
  std::vector<std::vector<double>> out;
  for_each_shift(d, per_axis, [&](const Shift& k) {
    std::vector<double> phi;
    for (int c : k) phi.push_back(M_PI * c / per_axis);
    out.push_back(std::move(phi));
  });
  return out;
}

struct Check {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool passed = false;
  std::string where;
};

}  // namespace

int cmd_reduce(const RunConfig& c, std::ostream& out) {
  const fs::path dir = run_directory(c, true);
  write_manifest(dir, c);
  const std::string hash = manifest_hash(c);
  const std::vector<double> grid = lambda_grid(c.lambda_points);

  CsvWriter acc(hash, {"eps", "gamma", "index", "lambda", "accepted", "steps", "failed_step", "reason", "final_residual",
                       "final_relative", "witness"});
  CsvWriter res(hash, {"eps", "gamma", "index", "lambda", "step", "N", "residual_before", "residual_after", "R_s",
                       "A_s0", "min_divisor", "screened", "tail_mass", "hamiltonian_residual", "imag_residue",
                       "sign_asymmetry", "series_terms"});
  CsvWriter eig(hash, {"eps_index", "gamma_index", "eps", "gamma", "index", "lambda", "accepted", "m", "mu", "r"});
  CsvWriter sum(hash, {"eps_index", "gamma_index", "eps", "gamma", "acceptance_rate", "max_abs_r", "fitted_r_constant",
                       "smallness_warning", "probe_index", "probe_lambda", "probe_steps", "verify_abs",
                       "verify_relative", "verify_budget", "verify_passed"});

  for (std::size_t ie = 0; ie < c.eps.size(); ++ie)
    for (std::size_t ig = 0; ig < c.gamma.size(); ++ig) {
      const NlsModel model = model_of(c, c.eps[ie]);
      const Schedule sched = schedule_of(c, c.gamma[ig]).resolved(model);
      const ReducibilityResult result = iterate(model, sched, grid, iterate_options(c));
      const std::string e = fmt(c.eps[ie]), g = fmt(c.gamma[ig]);

      for (std::size_t i = 0; i < result.runs.size(); ++i) {
        const LambdaRun& run = result.runs[i];
        const double r0 = run.residuals.front();
        acc.row({e, g, str(i), fmt(run.lambda), flag(run.accepted), str(run.steps), str(run.failed_step), run.reason,
                 fmt(run.residuals.back()), fmt(r0 > 0.0 ? run.residuals.back() / r0 : 0.0),
                 run.witness ? run.witness->describe() : ""});
        for (std::size_t n = 0; n < run.diagnostics.size(); ++n) {
          const StepDiagnostics& d = run.diagnostics[n];
          res.row({e, g, str(i), fmt(run.lambda), str(d.step), str(d.N), fmt(run.residuals[n]),
                   fmt(run.residuals[n + 1]), fmt(d.R_s), fmt(d.A_s0), fmt(d.min_divisor), str(d.screened),
                   fmt(d.tail_mass), fmt(d.hamiltonian_residual), fmt(d.imag_residue), fmt(d.sign_asymmetry),
                   str(d.series_terms)});
        }
        const std::vector<double> mu = run.final_diagonal.mu_all();
        for (std::size_t m = 0; m < mu.size(); ++m)
          eig.row({str(ie), str(ig), e, g, str(i), fmt(run.lambda), flag(run.accepted), str(m), fmt(mu[m]),
                   fmt(run.final_diagonal.r[m])});
      }

      const int probe = nearest_accepted(result, c.probe_lambda_index);
      ReductionReport rep;
      int steps = 0;
      double lambda = 0.0;
      if (probe >= 0) {
        lambda = grid[static_cast<std::size_t>(probe)];
        const LambdaRun run = iterate_one(model, sched, lambda, true);
        steps = run.steps;
        for (int n = 0; n < run.steps; ++n) {
          std::ofstream os(dir / transform_file(static_cast<int>(ie), static_cast<int>(ig), n), std::ios::binary);
          write_operator(os, run.chain[static_cast<std::size_t>(n)]);
        }
        rep = verify_reduction(model, sched, run.chain, run.final_diagonal, lambda,
                               run.tail_budget + run.residuals.back());
      }
      sum.row({str(ie), str(ig), e, g, fmt(result.acceptance_rate()), fmt(result.max_abs_r()),
               fmt(result.fitted_r_constant()), flag(result.smallness_warning), str(probe), fmt(lambda), str(steps),
               fmt(rep.absolute), fmt(rep.relative), fmt(rep.budget), flag(rep.passed)});
      out << "eps " << e << " gamma " << g << ": acceptance " << result.acceptance_rate() << ", max |r| "
          << result.max_abs_r() << (result.smallness_warning ? " (eps/gamma above the smallness bound)" : "")
          << "\n";
    }
  acc.save(dir / "acceptance.csv");
  res.save(dir / "residuals.csv");
  eig.save(dir / "eigenvalues.csv");
  sum.save(dir / "summary.csv");
  out << "artifacts in " << dir.string() << "\n";
  return kExitOk;
}

int cmd_sieve(const RunConfig& c, std::ostream& out) {
  const GroupSpec g = group_of(c);
  const fs::path dir = run_directory(c, c.eps.front() == 0.0);
  SpectrumFamily fam = SpectrumFamily::unperturbed(g, c.mass);
  if (c.eps.front() != 0.0) fam = family_from(require_reduction(c), g, c.mass);
  write_manifest(dir, c);
  const std::string hash = manifest_hash(c);
  const FrequencyDirection f = frequency_of(c);

  const SieveReport rep =
      measure_estimate(fam, f, c.sieve_gamma, lambda_grid(c.sieve_lambda_points), c.tau, c.sieve_L_max, c.sieve_M_max);

  CsvWriter fr(hash, {"kind", "gamma", "fraction", "resonant_samples", "samples", "slope", "intercept", "degenerate"});
  for (const GammaRow& r : rep.rows)
    fr.row({"sample", fmt(r.gamma), fmt(r.fraction), str(r.resonant_samples), str(c.sieve_lambda_points), "", "", ""});
  if (rep.rows.size() >= 2)
    fr.row({"fit", "", "", "", "", rep.has_fit ? fmt(rep.slope) : "", rep.has_fit ? fmt(rep.intercept) : "",
            flag(rep.degenerate)});
  fr.save(dir / "sieve_fractions.csv");

  CsvWriter st(hash, {"claim", "tuples"});
  st.row({"total", str(rep.stats.total)});
  st.row({"small_omega", str(rep.stats.small_omega)});
  st.row({"label_range", str(rep.stats.label_range)});
  st.row({"separation", str(rep.stats.separation)});
  st.row({"examined", str(rep.stats.examined)});
  st.save(dir / "sieve_prune_stats.csv");

  CsvWriter wt(hash, {"l", "m", "a", "mp", "ap", "value", "threshold"});
  for (const SieveTuple& t : rep.witnesses)
    wt.row({to_string(t.l), str(t.m), str(t.a), str(t.mp), str(t.ap), fmt(t.value), fmt(t.threshold)});
  wt.save(dir / "sieve_witnesses.csv");

  CsvWriter tb(hash, {"radius", "bound"});
  for (std::size_t k = 0; k < rep.tail_bound_by_radius.size(); ++k) tb.row({str(k), fmt(rep.tail_bound_by_radius[k])});
  tb.save(dir / "sieve_tail.csv");

  out << "gap lower bound " << rep.gap_lower << ", small-omega threshold " << rep.small_omega_threshold << "\n";
  for (const GammaRow& r : rep.rows) out << "gamma " << r.gamma << ": fraction " << r.fraction << "\n";
  if (rep.has_fit) out << "log-log slope " << rep.slope << (rep.degenerate ? " (degenerate)" : "") << "\n";
  out << "artifacts in " << dir.string() << "\n";
  return kExitOk;
}

int cmd_stability(const RunConfig& c, std::ostream& out) {
  const fs::path dir = require_reduction(c);
  const std::string hash = manifest_hash(c);
  const GroupSpec g = group_of(c);

  CsvWriter band(hash, {"eps", "lambda", "source", "t_end", "inf", "sup", "half_width"});
  CsvWriter cmp(hash, {"eps", "lambda", "compare_t", "max_diff", "allowed_at_worst", "worst_time", "passed",
                       "verify_residual", "max_pairing_defect", "reduced_norm_drift", "transform_error",
                       "psi_minus_id_s0"});
  for (std::size_t ie = 0; ie < c.eps.size(); ++ie) {
    const double eps = c.eps[ie];
    const NlsModel model = model_of(c, eps);
    const Schedule sched = schedule_of(c, c.gamma.front()).resolved(model);
    const ProbeRecord probe = read_probe(dir, static_cast<int>(ie), 0);
    const std::vector<ToeplitzOperator> chain = read_chain(dir, static_cast<int>(ie), 0, probe.steps);
    const double r0 = s_norm(initial_remainder(model), sched.s0);
    ToeplitzOperator psi = ToeplitzOperator::identity(g, c.d, c.M_max), psi_inv = psi;
    if (!chain.empty()) {
      psi = compose_transform(chain, false, series_options(sched, r0));
      psi_inv = compose_transform(chain, true, series_options(sched, r0));
    }
    std::vector<double> mu(probe.r.size());
    for (std::size_t m = 0; m < mu.size(); ++m) mu[m] = eigenvalue(static_cast<int>(m), g) + c.mass + probe.r[m];

    const Eigen::VectorXcd h0 = paired_state(g, c.M_max + 1, c.s0 + 1.0, c.s0, c.seed);
    const ConjugatedFlow flow(psi, psi_inv, mu, probe.lambda, model.freq, h0);
    const double t_end = c.stability_t_end > 0.0 ? c.stability_t_end : (eps > 0.0 ? 100.0 / eps : 100.0);
    const auto cb = conjugated_band(flow, g, t_end, c.stability_samples, c.s0);
    band.row({fmt(eps), fmt(probe.lambda), "conjugated", fmt(t_end), fmt(cb.first), fmt(cb.second),
              fmt(std::max(1.0 - cb.first, cb.second - 1.0))});

    const Trajectory traj = evolve_linearized(model, probe.lambda, h0, c.stability_compare_t, c.stability_tol,
                                              c.stability_compare_samples, 0.0, c.s0);
    if (traj.info.aborted) out << "integration aborted: " << traj.info.message << "\n";
    const auto db = stability_band(traj, c.s0);
    band.row({fmt(eps), fmt(probe.lambda), "direct", fmt(traj.times.back()), fmt(db.first), fmt(db.second),
              fmt(std::max(1.0 - db.first, db.second - 1.0))});
    const FlowComparison fc = compare_flows(traj, flow, probe.verify_abs, c.s0);

    double pairing = 0.0, drift = 0.0;
    const double v0 = phase_norm(flow.v0(), g, c.s);
    CsvWriter tr(hash, {"t", "norm_s0", "norm_s", "conjugated_norm_s0", "difference_s0"});
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
      const double t = traj.times[k];
      const Eigen::VectorXcd& h = traj.states[k];
      const Eigen::VectorXcd hc = flow.at(t);
      pairing = std::max(pairing, pairing_defect(h));
      drift = std::max(drift, std::abs(phase_norm(evolve_reduced(mu, flow.v0(), t), g, c.s) - v0));
      tr.row({fmt(t), fmt(phase_norm(h, g, c.s0)), fmt(phase_norm(h, g, c.s)), fmt(phase_norm(hc, g, c.s0)),
              fmt(phase_norm(h - hc, g, c.s0))});
    }
    tr.save(dir / ("stability_trajectory_e" + str(ie) + ".csv"));
    const double terr = transform_error(psi_inv, torus_samples(c.d, 8), h0, c.s0);
    const double pid = s_norm(psi - ToeplitzOperator::identity(g, c.d, c.M_max), c.s0);
    cmp.row({fmt(eps), fmt(probe.lambda), fmt(c.stability_compare_t), fmt(fc.max_diff), fmt(fc.allowed_at_worst),
             fmt(fc.worst_time), flag(fc.passed), fmt(probe.verify_abs), fmt(pairing), fmt(drift), fmt(terr),
             fmt(pid)});
    out << "eps " << eps << " lambda " << probe.lambda << ": band half-width "
        << std::max(1.0 - cb.first, cb.second - 1.0) << " over [0, " << t_end << "], flow difference " << fc.max_diff
        << (fc.passed ? " (within allowance)" : " (above allowance)") << "\n";
  }
  band.save(dir / "stability_band.csv");
  cmp.save(dir / "stability_compare.csv");
  out << "artifacts in " << dir.string() << "\n";
  return kExitOk;
}

int cmd_verify(const RunConfig& c, std::ostream& out) {
  const fs::path dir = run_directory(c, true);
  write_manifest(dir, c);
  const std::string hash = manifest_hash(c);
  const GroupSpec g = group_of(c);
  const FrequencyDirection f = frequency_of(c);
  std::mt19937_64 rng(c.seed);
  std::vector<Check> checks;

  // Homological equation and dense conjugation on a small box.
  {
    const int M = std::min(c.M_max, 12), L = 6, N = 1, inner = 1;
    NlsModel small = model_of(c, 0.0);
    small.M_max = M;
    const DiagonalPart D = build_diagonal(small);
    const LatticeBox box(c.d, L, M);
    double worst = 0.0, worst_conj = 0.0, worst_ham = 0.0;
    for (int k = 0; k < 5; ++k) {
      const ToeplitzOperator R = random_hamiltonian(g, c.d, M, 1, 1e-3, 2.0, c.seed + static_cast<std::uint64_t>(k));
      worst_ham = std::max(worst_ham, check_hamiltonian(R, 1e-10, c.s0).residual);
      const double lambda = screened_lambda(D, f, c.gamma.front(), c.tau, N, rng);
      const HomologicalProblem hp{lambda, N, c.gamma.front(), c.tau};
      worst = std::max(worst, homological_residual(R, D, f, hp, box, inner).relative);
      if (k == 0) {
        const ToeplitzOperator A = solve_homological(R, D, f, hp);
        StepParams p;
        p.N = N;
        p.shift_cap = 4 * L;
        p.skip_rel = 0.0;
        p.series_tol = 1e-16;
        worst_conj = dense_conjugation(R, D, f, lambda, A, conjugate(D, R, A, p), box, inner).relative;
      }
    }
    checks.push_back({"homological_residual", worst, 1e-12, worst <= 1e-12, ""});
    checks.push_back({"dense_conjugation", worst_conj, 1e-10, worst_conj <= 1e-10, ""});
    checks.push_back({"random_hamiltonian_structure", worst_ham, 1e-10, worst_ham <= 1e-10, ""});
  }

  // One reduction at reduced size, its structure, and its verification.
  {
    NlsModel model = model_of(c, c.eps.front() > 0.0 ? c.eps.front() : 1e-3);
    model.M_max = std::min(c.M_max, 12);
    const Schedule sched = schedule_of(c, c.gamma.front()).resolved(model);
    const std::vector<double> grid = lambda_grid(c.lambda_points);
    LambdaRun run;
    for (int k = 0; k < c.lambda_points && !run.accepted; ++k) {
      const int i = (c.probe_lambda_index + k) % c.lambda_points;
      run = iterate_one(model, sched, grid[static_cast<std::size_t>(i)], true);
    }
    double ham = 0.0;
    for (const auto& d : run.diagnostics) ham = std::max(ham, d.hamiltonian_residual);
    checks.push_back({"reduction_accepted", run.accepted ? 1.0 : 0.0, 1.0, run.accepted, "lambda " + fmt(run.lambda)});
    checks.push_back({"hamiltonian_persistence", ham, 1e-10, ham <= 1e-10, ""});
    if (run.accepted) {
      std::vector<ToeplitzOperator> chain = run.chain;
      if (c.verify_mutation == "sign_flip" && chain.size() > 1) chain[1] *= cplx(-1.0);
      const ReductionReport rep = verify_reduction(model, sched, chain, run.final_diagonal, run.lambda,
                                                   run.tail_budget + run.residuals.back());
      checks.push_back({"reduction_residual", rep.absolute, rep.budget, rep.passed,
                        "h=" + to_string(rep.where_h) + " m=" + str(rep.where_m) + " a=" + str(rep.where_a) +
                            " m'=" + str(rep.where_mp) + " a'=" + str(rep.where_ap)});
    }
  }

  // Pruning audit against brute force.
  {
    const SpectrumFamily fam = SpectrumFamily::unperturbed(g, c.mass);
    const double gamma = c.sieve_gamma.front();
    const AuditReport a = pruning_audit(fam, f, lambda_grid(5), gamma, c.tau, 3, 16, 1000, c.seed);
    checks.push_back({"pruning_false_prunes", static_cast<double>(a.false_prunes + a.random_failures), 0.0,
                      a.false_prunes + a.random_failures == 0, ""});
    const Sieve s(fam, f, {c.tau, 3, 16, gamma});
    std::size_t mismatches = 0;
    for (double lambda : lambda_grid(5))
      if (s.resonant(lambda, gamma).size() != resonant_brute_force(fam, f, lambda, gamma, c.tau, 3, 16).size())
        ++mismatches;
    checks.push_back({"sieve_matches_brute_force", static_cast<double>(mismatches), 0.0, mismatches == 0, ""});
  }

  CsvWriter w(hash, {"check", "value", "threshold", "passed", "where"});
  bool all = true;
  for (const Check& k : checks) {
    w.row({k.name, fmt(k.value), fmt(k.threshold), flag(k.passed), k.where});
    out << (k.passed ? "ok    " : "FAIL  ") << k.name << " " << k.value << " (threshold " << k.threshold << ")"
        << (k.where.empty() ? "" : " at " + k.where) << "\n";
    all = all && k.passed;
  }
  w.save(dir / "verify.csv");
  return all ? kExitOk : kExitCheckFailed;
}

int cmd_bench(const RunConfig& c, std::ostream& out) {
  using clock = std::chrono::steady_clock;
  auto secs = [](clock::time_point a) { return std::chrono::duration<double>(clock::now() - a).count(); };
  const NlsModel model = model_of(c, c.eps.front());
  const Schedule sched = schedule_of(c, c.gamma.front()).resolved(model);
  const double lambda = lambda_grid(c.lambda_points)[static_cast<std::size_t>(c.probe_lambda_index)];

  auto t0 = clock::now();
  const LambdaRun run = iterate_one(model, sched, lambda, true);
  out << "iterate_one lambda " << lambda << ": " << secs(t0) << " s, " << run.steps << " steps\n";
  if (run.accepted) {
    t0 = clock::now();
    verify_reduction(model, sched, run.chain, run.final_diagonal, lambda, run.tail_budget + run.residuals.back());
    out << "verify_reduction: " << secs(t0) << " s\n";
  }
  t0 = clock::now();
  const SpectrumFamily fam = SpectrumFamily::unperturbed(group_of(c), c.mass);
  const Sieve s(fam, frequency_of(c), {c.tau, c.sieve_L_max, c.sieve_M_max, c.sieve_gamma.front()});
  out << "sieve setup: " << secs(t0) << " s, " << s.candidates() << " candidates\n";
  t0 = clock::now();
  for (double l : lambda_grid(100)) s.resonance_level(l);
  out << "100 resonance levels: " << secs(t0) << " s\n";
  return kExitOk;
}

int run_command(const std::string& name, const std::string& config_path, std::ostream& out, std::ostream& err) {
  static const std::map<std::string, std::pair<Purpose, int (*)(const RunConfig&, std::ostream&)>> table = {
      {"reduce", {Purpose::reduce, cmd_reduce}},       {"sieve", {Purpose::sieve, cmd_sieve}},
      {"stability", {Purpose::stability, cmd_stability}}, {"verify", {Purpose::verify, cmd_verify}},
      {"bench", {Purpose::bench, cmd_bench}},
  };
  const auto it = table.find(name);
  if (it == table.end()) {
    err << "unknown subcommand `" << name << "` (reduce | sieve | stability | verify | bench)\n";
    return kExitConfig;
  }
  try {
    const RunConfig c = load_config(config_path);
    validate(c, it->second.first);
    return it->second.second(c, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const MissingArtifacts& e) {
    err << e.what() << "\n";
    return kExitMissing;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitCheckFailed;
  }
}

}  // namespace kamlie
