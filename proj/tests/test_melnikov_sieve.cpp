#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>

#include "kamlie/config.hpp"
#include "kamlie/melnikov_sieve.hpp"

using namespace kamlie;

namespace {

using Key = std::tuple<Shift, int, int, int, int>;

std::set<Key> keys(const std::vector<SieveTuple>& v) {
  std::set<Key> out;
  for (const auto& t : v) out.insert({t.l, t.m, t.a, t.mp, t.ap});
  return out;
}

const FrequencyDirection& freq() {
  static const FrequencyDirection f = default_frequency(2, 200);
  return f;
}

std::vector<double> grid(int n) { return lambda_grid(n); }

// corrections from a small perturbed run
const SpectrumFamily& perturbed() {
  static const SpectrumFamily fam = [] {
    RunConfig c;
    c.M_max = 8;
    c.lambda_points = 24;
    const NlsModel model = model_of(c, 1e-3);
    const ReducibilityResult res = iterate(model, schedule_of(c, 1e-2), lambda_grid(24));
    return SpectrumFamily::from_result(res, model.group, model.mass);
  }();
  return fam;
}

}  // namespace

TEST_CASE("spectrum family") {
  const SpectrumFamily u = SpectrumFamily::unperturbed(GroupSpec::su2(), 1.0);
  const auto mu = u.mu(0.8, 5);
  REQUIRE(mu.size() == 6);
  CHECK(mu[1] == doctest::Approx(1.375));
  const SpectrumFamily& p = perturbed();
  CHECK(p.max_abs_r() > 0.0);
  CHECK(p.max_abs_r() < 1e-2);
  // labels beyond the reduction use r = 0
  CHECK(p.mu(1.0, 20)[20] == eigenvalue(20, GroupSpec::su2()) + 1.0);
  // interpolation hits the grid values
  CHECK(p.r_at(p.grid[3]) == p.r[3]);
}

TEST_CASE("gamma = 0 gives no resonances at a generic lambda") {
  const SpectrumFamily u = SpectrumFamily::unperturbed(GroupSpec::su2(), 1.0);
  CHECK(resonant_membership(0.91373, u, freq(), 0.0, 5.0, 6, 30).empty());
  CHECK(resonant_brute_force(u, freq(), 0.91373, 0.0, 5.0, 6, 30).empty());
}

TEST_CASE("a crafted resonance is reported") {
  // mu_1 - mu_0 = omega_1 puts lambda = 1 on the tuple (l0, 1, +, 0, +), l0 = (-1, 0)
  SpectrumFamily fam = SpectrumFamily::unperturbed(GroupSpec::su2(), 1.0);
  fam.grid = {0.5, 1.5};
  std::vector<double> r(2, 0.0);
  r[1] = freq().omega_tilde[0] - 3.0 / 8;
  fam.r = {r, r};
  for (double gamma : {1e-9, 1e-6, 1e-3}) {
    const auto hits = keys(resonant_membership(1.0, fam, freq(), gamma, 5.0, 4, 10));
    CHECK(hits.count({Shift{-1, 0}, 1, 1, 0, 1}) == 1);
    CHECK(hits.count({Shift{1, 0}, 0, 1, 1, 1}) == 1);
  }
}

TEST_CASE("pruning agrees exactly with brute force") {
  for (const SpectrumFamily* fam : std::vector<const SpectrumFamily*>{&perturbed(), nullptr}) {
    const SpectrumFamily u = SpectrumFamily::unperturbed(GroupSpec::su2(), 1.0);
    const SpectrumFamily& F = fam ? *fam : u;
    for (double gamma : {1e-2, 1e-3}) {
      const Sieve s(F, freq(), {5.0, 4, 24, gamma});
      for (double lam : {0.5, 0.61803, 0.8, 1.0, 1.2345, 1.4999}) {
        const auto a = keys(s.resonant(lam, gamma));
        const auto b = keys(resonant_brute_force(F, freq(), lam, gamma, 5.0, 4, 24));
        CHECK(a == b);
      }
    }
  }
}

TEST_CASE("membership is monotone in gamma") {
  const Sieve s(perturbed(), freq(), {5.0, 6, 40, 1e-2});
  for (double lam : {0.55, 0.77, 1.11, 1.43}) {
    std::set<Key> prev;
    for (double gamma : {1e-4, 1e-3, 3e-3, 1e-2}) {
      const auto cur = keys(s.resonant(lam, gamma));
      CHECK(std::includes(cur.begin(), cur.end(), prev.begin(), prev.end()));
      prev = cur;
    }
    const double level = s.resonance_level(lam);
    CHECK(level >= 0.0);
    if (level < 9e-3) {
      CHECK(s.resonant(lam, level * 1.000001).size() >= 1);
      CHECK(s.resonant(lam, level * 0.999999).empty());
    }
    CHECK(s.resonant(lam, 1e-2).empty() == (level > 1e-2));
  }
  CHECK_THROWS(s.resonant(1.0, 2e-2));
}

TEST_CASE("pruning audit") {
  const AuditReport rep = pruning_audit(perturbed(), freq(), grid(7), 1e-2, 5.0, 5, 40, 2000, 3);
  CHECK(rep.tuples > 0);
  CHECK(rep.pruned > rep.tuples / 2);
  CHECK(rep.false_prunes == 0);
  CHECK(rep.random_checks == 2000);
  CHECK(rep.random_failures == 0);
  MESSAGE("literal 1/3 rule false prunes: " << rep.literal_third_false_prunes);
}

TEST_CASE("gap lower bound used for pruning") {
  const SpectrumFamily u = SpectrumFamily::unperturbed(GroupSpec::su2(), 1.0);
  const Sieve su(u, freq(), {5.0, 4, 80, 1e-2});
  CHECK(su.gap_lower() == doctest::Approx(3.0 / 8).epsilon(1e-14));
  CHECK(su.small_omega_threshold() == doctest::Approx((2.0 / 3) * (3.0 / 8 - 2e-2)).epsilon(1e-14));

  const SpectrumFamily& p = perturbed();
  const Sieve sp(p, freq(), {5.0, 4, 80, 1e-2});
  CHECK(sp.gap_lower() == doctest::Approx(3.0 / 8 - 2 * p.max_abs_r()).epsilon(1e-14));
  for (double lam : grid(24)) {
    const auto mu = p.mu(lam, 80);
    double gap = 1e300;
    for (int m = 0; m <= 80; ++m)
      for (int mp = 0; mp <= 80; ++mp) {
        if (m != mp) gap = std::min(gap, std::abs(mu[m] - mu[mp]));
        gap = std::min(gap, mu[m] + mu[mp]);
      }
    CHECK(gap >= sp.gap_lower());
    // the bound 5/8 - C eps from the text does not hold: the m = 0, 1 pair sits at 3/8
    CHECK(gap < 5.0 / 8 - 0.1);
  }
}

TEST_CASE("measure estimate") {
  const SpectrumFamily u = SpectrumFamily::unperturbed(GroupSpec::su2(), 1.0);
  const std::vector<double> gammas{1e-2, 3e-3, 1e-3};
  const SieveReport rep = measure_estimate(u, freq(), gammas, grid(2000), 5.0, 8, 80);
  REQUIRE(rep.rows.size() == 3);
  CHECK(rep.has_fit);
  CHECK_FALSE(rep.degenerate);
  MESSAGE("unperturbed fractions " << rep.rows[0].fraction << " " << rep.rows[1].fraction << " "
                                   << rep.rows[2].fraction << ", slope " << rep.slope);
  CHECK(rep.slope >= 0.7);
  CHECK(rep.slope <= 1.3);
  for (std::size_t i = 1; i < rep.rows.size(); ++i) CHECK(rep.rows[i].fraction <= rep.rows[i - 1].fraction);
  CHECK(rep.witnesses.size() == 3);
  for (const auto& w : rep.witnesses) CHECK(std::abs(w.value) <= w.threshold);

  // the slope agrees with a fit on the emitted rows
  std::vector<double> x, y;
  for (const auto& r : rep.rows) {
    x.push_back(r.gamma);
    y.push_back(r.fraction);
  }
  double slope = 0, icpt = 0;
  REQUIRE(loglog_fit(x, y, slope, icpt));
  CHECK(slope == doctest::Approx(rep.slope).epsilon(1e-12));

  // doubling the shift range moves the fractions by less than the tail bound predicts
  const SieveReport half = measure_estimate(u, freq(), gammas, grid(2000), 5.0, 4, 80);
  double tail = 0.0;
  for (int k = 5; k <= 8; ++k) tail += rep.tail_bound_by_radius[k];
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(half.rows[i].fraction <= rep.rows[i].fraction);
    CHECK(rep.rows[i].fraction - half.rows[i].fraction <= tail);
  }
  for (std::size_t k = 2; k < rep.tail_bound_by_radius.size(); ++k)
    CHECK(rep.tail_bound_by_radius[k] < rep.tail_bound_by_radius[1]);

  // perturbed spectrum follows the same law
  const SieveReport pr = measure_estimate(perturbed(), freq(), gammas, grid(2000), 5.0, 8, 80);
  MESSAGE("perturbed slope " << pr.slope);
  CHECK(pr.slope >= 0.7);
  CHECK(pr.slope <= 1.3);
}

TEST_CASE("degenerate sweeps are flagged") {
  const SpectrumFamily u = SpectrumFamily::unperturbed(GroupSpec::su2(), 1.0);
  const SieveReport tiny = measure_estimate(u, freq(), {1e-13, 1e-14}, {0.61, 0.73, 0.91}, 5.0, 3, 10);
  CHECK(tiny.degenerate);
  const SieveReport one = measure_estimate(u, freq(), {1e-2}, grid(50), 5.0, 3, 10);
  CHECK(one.rows.size() == 1);
  CHECK_FALSE(one.has_fit);
}

TEST_CASE("log-log fit") {
  double slope = 0, icpt = 0;
  CHECK(loglog_fit({1, 10, 100}, {3, 30, 300}, slope, icpt));
  CHECK(slope == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::exp(icpt) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(loglog_fit({1, 2, 4}, {1, 4, 16}, slope, icpt));
  CHECK(slope == doctest::Approx(2.0).epsilon(1e-14));
  CHECK_FALSE(loglog_fit({1}, {1}, slope, icpt));
  CHECK_FALSE(loglog_fit({1, 2}, {0, 0}, slope, icpt));
}
