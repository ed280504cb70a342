#include "kamlie/melnikov_sieve.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <thread>

namespace kamlie {

namespace {

int shift_index(const Shift& l, int L) {
  int idx = 0;
  for (int c : l) {
    if (std::abs(c) > L) return -1;
    idx = idx * (2 * L + 1) + (c + L);
  }
  return idx;
}

double separation(int m, int a, int mp, int ap, const GroupSpec& g) {
  const double x = g.weight(m) + g.rho, y = g.weight(mp) + g.rho;
  return std::abs(a * x * x - ap * y * y);
}

double min_pair_gap(const std::vector<double>& mu) {
  const int n = static_cast<int>(mu.size());
  double best = std::numeric_limits<double>::infinity();
  for (int m = 0; m < n; ++m)
    for (int mp = 0; mp < n; ++mp)
      for (int a : {1, -1})
        for (int ap : {1, -1}) {
          if (m == mp && a == ap) continue;
          best = std::min(best, std::abs(a * mu[static_cast<std::size_t>(m)] - ap * mu[static_cast<std::size_t>(mp)]));
        }
  return best;
}

template <typename F>
void parallel_for(std::size_t n, F&& f) {
  const int workers = std::max(1, std::min<int>(default_workers(), static_cast<int>(n)));
  std::atomic<std::size_t> next{0};
  auto run = [&] {
    for (std::size_t i = next++; i < n; i = next++) f(i);
  };
  if (workers == 1) {
    run();
    return;
  }
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(run);
  for (auto& t : pool) t.join();
}

}  // namespace

SpectrumFamily SpectrumFamily::unperturbed(const GroupSpec& g, double mass) {
  SpectrumFamily f;
  f.group = g;
  f.mass = mass;
  return f;
}

SpectrumFamily SpectrumFamily::from_result(const ReducibilityResult& res, const GroupSpec& g, double mass) {
  SpectrumFamily f;
  f.group = g;
  f.mass = mass;
  for (const auto& run : res.runs) {
    f.grid.push_back(run.lambda);
    f.r.push_back(run.r_history.back());
  }
  return f;
}

std::vector<double> SpectrumFamily::r_at(double lambda) const {
  if (grid.empty()) return {};
  if (lambda <= grid.front()) return r.front();
  if (lambda >= grid.back()) return r.back();
  const auto it = std::upper_bound(grid.begin(), grid.end(), lambda);
  const std::size_t i = static_cast<std::size_t>(it - grid.begin());
  const double t = (lambda - grid[i - 1]) / (grid[i] - grid[i - 1]);
  std::vector<double> out(r[i].size());
  for (std::size_t m = 0; m < out.size(); ++m) out[m] = (1.0 - t) * r[i - 1][m] + t * r[i][m];
  return out;
}

std::vector<double> SpectrumFamily::mu(double lambda, int max_label) const {
  const std::vector<double> rr = r_at(lambda);
  std::vector<double> out(static_cast<std::size_t>(max_label + 1));
  for (int m = 0; m <= max_label; ++m) {
    const double corr = static_cast<std::size_t>(m) < rr.size() ? rr[static_cast<std::size_t>(m)] : 0.0;
    out[static_cast<std::size_t>(m)] = eigenvalue(m, group) + mass + corr;
  }
  return out;
}

double SpectrumFamily::max_abs_r() const {
  double best = 0.0;
  for (const auto& row : r)
    for (double v : row) best = std::max(best, std::abs(v));
  return best;
}

Sieve::Sieve(const SpectrumFamily& fam, const FrequencyDirection& f, const SieveParams& p)
    : fam_(&fam), freq_(f), p_(p) {
  const GroupSpec& g = fam.group;
  const int n = p.M_max + 1;
  gap_lower_ = min_pair_gap(SpectrumFamily::unperturbed(g, fam.mass).mu(1.0, p.M_max)) - 2.0 * fam.max_abs_r();
  omega_threshold_ = std::max(0.0, (2.0 / 3.0) * (gap_lower_ - 2.0 * p.gamma_max));

  by_radius_.assign(static_cast<std::size_t>(p.L_max + 1), 0);
  const std::size_t per_l = static_cast<std::size_t>(2 * n) * static_cast<std::size_t>(2 * n);
  for_each_shift(f.dim(), p.L_max, [&](const Shift& l) {
    const int li = static_cast<int>(ls_.size());
    ls_.push_back(l);
    const double wl = f.dot(l);
    omega_l_.push_back(wl);
    const int k = inf_norm(l);
    weight_.push_back(std::pow(bracket(k), p.tau));
    const std::size_t tuples = k == 0 ? per_l - static_cast<std::size_t>(2 * n) : per_l;
    stats_.total += tuples;
    if (std::abs(wl) < omega_threshold_) {
      l_alive_.push_back(0);
      stats_.small_omega += tuples;
      return;
    }
    l_alive_.push_back(1);
    for (int m = 0; m < n; ++m)
      for (int a : {1, -1})
        for (int mp = 0; mp < n; ++mp)
          for (int ap : {1, -1}) {
            if (k == 0 && m == mp && a == ap) continue;
            if (k > 0 && (g.weight(m) >= 9.0 * k || g.weight(mp) >= 9.0 * k)) {
              ++stats_.label_range;
              continue;
            }
            if (separation(m, a, mp, ap, g) > 6.0 * k) {
              ++stats_.separation;
              continue;
            }
            ++stats_.examined;
            cands_.push_back({li, m, a, mp, ap});
            ++by_radius_[static_cast<std::size_t>(k)];
          }
  });
}

bool Sieve::pruned(const Shift& l, int m, int a, int mp, int ap) const {
  const int li = shift_index(l, p_.L_max);
  if (li < 0) throw std::invalid_argument("Sieve::pruned: l outside the range");
  if (!l_alive_[static_cast<std::size_t>(li)]) return true;
  const int k = inf_norm(l);
  const GroupSpec& g = fam_->group;
  if (k > 0 && (g.weight(m) >= 9.0 * k || g.weight(mp) >= 9.0 * k)) return true;
  return separation(m, a, mp, ap, g) > 6.0 * k;
}

std::vector<SieveTuple> Sieve::resonant(double lambda, double gamma) const {
  if (gamma > p_.gamma_max) throw std::invalid_argument("Sieve::resonant: gamma above the pruning bound");
  const std::vector<double> mu = fam_->mu(lambda, p_.M_max);
  std::vector<SieveTuple> out;
  for (const Cand& c : cands_) {
    const std::size_t li = static_cast<std::size_t>(c.li);
    const double v = lambda * omega_l_[li] + c.a * mu[static_cast<std::size_t>(c.m)] - c.ap * mu[static_cast<std::size_t>(c.mp)];
    const double thr = 2.0 * gamma / weight_[li];
    if (std::abs(v) <= thr) out.push_back({ls_[li], c.m, c.a, c.mp, c.ap, v, thr});
  }
  return out;
}

double Sieve::resonance_level(double lambda) const {
  const std::vector<double> mu = fam_->mu(lambda, p_.M_max);
  double best = std::numeric_limits<double>::infinity();
  for (const Cand& c : cands_) {
    const std::size_t li = static_cast<std::size_t>(c.li);
    const double v = lambda * omega_l_[li] + c.a * mu[static_cast<std::size_t>(c.m)] - c.ap * mu[static_cast<std::size_t>(c.mp)];
    best = std::min(best, 0.5 * std::abs(v) * weight_[li]);
  }
  return best;
}

std::vector<SieveTuple> resonant_brute_force(const SpectrumFamily& fam, const FrequencyDirection& f, double lambda,
                                             double gamma, double tau, int L_max, int M_max) {
  const std::vector<double> mu = fam.mu(lambda, M_max);
  std::vector<SieveTuple> out;
  for_each_shift(f.dim(), L_max, [&](const Shift& l) {
    const double w = lambda * f.dot(l);
    const double thr = 2.0 * gamma * std::pow(bracket(inf_norm(l)), -tau);
    for (int m = 0; m <= M_max; ++m)
      for (int a : {1, -1})
        for (int mp = 0; mp <= M_max; ++mp)
          for (int ap : {1, -1}) {
            if (inf_norm(l) == 0 && m == mp && a == ap) continue;
            const double v = w + a * mu[static_cast<std::size_t>(m)] - ap * mu[static_cast<std::size_t>(mp)];
            if (std::abs(v) <= thr) out.push_back({l, m, a, mp, ap, v, thr});
          }
  });
  return out;
}

std::vector<SieveTuple> resonant_membership(double lambda, const SpectrumFamily& fam, const FrequencyDirection& f,
                                            double gamma, double tau, int L_max, int M_max, PruneStats* stats) {
  const Sieve s(fam, f, {tau, L_max, M_max, gamma});
  if (stats) *stats = s.stats();
  return s.resonant(lambda, gamma);
}

AuditReport pruning_audit(const SpectrumFamily& fam, const FrequencyDirection& f, const std::vector<double>& lambdas,
                          double gamma, double tau, int L_max, int M_max, std::size_t random_checks,
                          std::uint64_t seed) {
  AuditReport rep;
  const Sieve s(fam, f, {tau, L_max, M_max, gamma});
  rep.measured_gap = std::numeric_limits<double>::infinity();
  for (double lambda : lambdas) {
    ++rep.lambdas;
    const std::vector<double> mu = fam.mu(lambda, M_max);
    rep.measured_gap = std::min(rep.measured_gap, min_pair_gap(mu));
    for_each_shift(f.dim(), L_max, [&](const Shift& l) {
      const double wl = f.dot(l);
      const double thr = 2.0 * gamma * std::pow(bracket(inf_norm(l)), -tau);
      const bool literal = std::abs(wl) < 1.0 / 3.0;
      for (int m = 0; m <= M_max; ++m)
        for (int a : {1, -1})
          for (int mp = 0; mp <= M_max; ++mp)
            for (int ap : {1, -1}) {
              if (inf_norm(l) == 0 && m == mp && a == ap) continue;
              ++rep.tuples;
              const double v = lambda * wl + a * mu[static_cast<std::size_t>(m)] - ap * mu[static_cast<std::size_t>(mp)];
              const bool res = std::abs(v) <= thr;
              if (s.pruned(l, m, a, mp, ap)) {
                ++rep.pruned;
                if (res) ++rep.false_prunes;
              }
              if (literal && res) ++rep.literal_third_false_prunes;
            }
    });
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ulam(0.5, 1.5);
  std::uniform_int_distribution<int> ul(-L_max, L_max), um(0, M_max), us(0, 1);
  std::size_t attempts = 0;
  while (rep.random_checks < random_checks && attempts < 1000 * random_checks) {
    ++attempts;
    Shift l(static_cast<std::size_t>(f.dim()));
    for (int& c : l) c = ul(rng);
    const int m = um(rng), mp = um(rng), a = us(rng) ? 1 : -1, ap = us(rng) ? 1 : -1;
    if (inf_norm(l) == 0 && m == mp && a == ap) continue;
    if (!s.pruned(l, m, a, mp, ap)) continue;
    const double lambda = ulam(rng);
    const std::vector<double> mu = fam.mu(lambda, M_max);
    const double v = lambda * f.dot(l) + a * mu[static_cast<std::size_t>(m)] - ap * mu[static_cast<std::size_t>(mp)];
    ++rep.random_checks;
    if (std::abs(v) <= 2.0 * gamma * std::pow(bracket(inf_norm(l)), -tau)) ++rep.random_failures;
  }
  return rep;
}

bool loglog_fit(const std::vector<double>& x, const std::vector<double>& y, double& slope, double& intercept) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
    if (!(x[i] > 0.0 && y[i] > 0.0)) continue;
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 2) return false;
  const double den = n * sxx - sx * sx;
  if (den == 0.0) return false;
  slope = (n * sxy - sx * sy) / den;
  intercept = (sy - slope * sx) / n;
  return true;
}

SieveReport measure_estimate(const SpectrumFamily& fam, const FrequencyDirection& f, const std::vector<double>& gammas,
                             const std::vector<double>& lambdas, double tau, int L_max, int M_max) {
  if (gammas.empty() || lambdas.empty()) throw std::invalid_argument("measure_estimate: empty gamma list or grid");
  SieveReport rep;
  const double gmax = *std::max_element(gammas.begin(), gammas.end());
  const Sieve s(fam, f, {tau, L_max, M_max, gmax});
  rep.stats = s.stats();
  rep.gap_lower = s.gap_lower();
  rep.small_omega_threshold = s.small_omega_threshold();

  std::vector<double> level(lambdas.size());
  parallel_for(lambdas.size(), [&](std::size_t i) { level[i] = s.resonance_level(lambdas[i]); });

  std::vector<double> fr;
  bool all_zero = true, all_one = true;
  for (double g : gammas) {
    GammaRow row;
    row.gamma = g;
    std::size_t first = lambdas.size();
    for (std::size_t i = 0; i < lambdas.size(); ++i)
      if (level[i] <= g) {
        ++row.resonant_samples;
        if (first == lambdas.size()) first = i;
      }
    row.fraction = static_cast<double>(row.resonant_samples) / static_cast<double>(lambdas.size());
    all_zero = all_zero && row.resonant_samples == 0;
    all_one = all_one && row.resonant_samples == lambdas.size();
    if (first < lambdas.size()) {
      const auto t = s.resonant(lambdas[first], g);
      if (!t.empty()) rep.witnesses.push_back(t.front());
    }
    rep.rows.push_back(row);
    fr.push_back(row.fraction);
  }
  rep.degenerate = all_zero || all_one;
  if (gammas.size() >= 2) rep.has_fit = loglog_fit(gammas, fr, rep.slope, rep.intercept);

  rep.tail_bound_by_radius.assign(static_cast<std::size_t>(L_max + 1), 0.0);
  for (int k = 0; k <= L_max; ++k)
    rep.tail_bound_by_radius[static_cast<std::size_t>(k)] =
        8.0 * gmax * std::pow(bracket(k), -tau) * static_cast<double>(s.candidates_by_radius()[static_cast<std::size_t>(k)]);
  return rep;
}

}  // namespace kamlie
