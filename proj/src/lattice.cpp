#include "kamlie/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace kamlie {

GroupSpec GroupSpec::su2() {
  const double rho = 1.0 / std::sqrt(8.0);
  return {GroupKind::SU2, rho, rho};
}

GroupSpec GroupSpec::so3() {
  const double rho = 1.0 / std::sqrt(8.0);
  return {GroupKind::SO3, rho, 2.0 * rho};
}

int inf_norm(const Shift& h) {
  int n = 0;
  for (int v : h) n = std::max(n, std::abs(v));
  return n;
}

Shift operator+(const Shift& a, const Shift& b) {
  Shift r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

Shift operator-(const Shift& a, const Shift& b) {
  Shift r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

Shift operator-(const Shift& a) {
  Shift r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
  return r;
}

std::string to_string(const Shift& h) {
  std::string s = "(";
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(h[i]);
  }
  return s + ")";
}

double site_distance(const Shift& h, int m, int a, int mp, int ap, const GroupSpec& g) {
  const int hn = inf_norm(h);
  if (hn == 0 && m == mp && a != ap) return 1.0;
  return std::max(static_cast<double>(hn), std::abs(m - mp) * g.label_step);
}

double site_distance(const SiteIndex& k, const SiteIndex& kp, const GroupSpec& g) {
  return site_distance(k.l - kp.l, k.m, k.a, kp.m, kp.a, g);
}

double sobolev_weight(const SiteIndex& k, const GroupSpec& g) { return sobolev_weight(k.m, g); }

double FrequencyDirection::dot(const Shift& l) const {
  double s = 0.0;
  for (std::size_t i = 0; i < omega_tilde.size(); ++i) s += omega_tilde[i] * l[i];
  return s;
}

DiophantineResult diophantine_check(const FrequencyDirection& f, int L) {
  if (L < 1) throw std::invalid_argument("diophantine_check: L must be >= 1");
  const int d = f.dim();
  DiophantineResult res;
  res.min_scaled = std::numeric_limits<double>::infinity();
  bool ok = true;
  for_each_shift(d, L, [&](const Shift& l) {
    const int n = inf_norm(l);
    if (n == 0) return;
    const double val = std::abs(f.dot(l));
    const double scaled = val * std::pow(static_cast<double>(n), d);
    res.min_scaled = std::min(res.min_scaled, scaled);
    if (ok && val < 2.0 * f.gamma0 * std::pow(static_cast<double>(n), -d)) {
      ok = false;
      res.witness = l;
    }
  });
  res.certified = ok;
  res.certified_up_to = ok ? L : 0;
  return res;
}

FrequencyDirection default_frequency(int d, int scan) {
  if (d < 1) throw std::invalid_argument("default_frequency: d must be >= 1");
  FrequencyDirection f;
  f.omega_tilde.resize(static_cast<std::size_t>(d));
  // successive entries 1, sqrt2 - 1, sqrt3 - 1, sqrt5 - 2, ... (quadratic irrationals)
  const double seeds[] = {1.0, std::sqrt(2.0) - 1.0, std::sqrt(3.0) - 1.0, std::sqrt(5.0) - 2.0,
                          std::sqrt(7.0) - 2.0, std::sqrt(11.0) - 3.0};
  double l1 = 0.0;
  for (int i = 0; i < d; ++i) {
    f.omega_tilde[i] = seeds[i % 6] / (1 + i / 6);
    l1 += std::abs(f.omega_tilde[i]);
  }
  for (double& w : f.omega_tilde) w /= l1;
  f.gamma0 = 1.0;  // placeholder for the scan below
  const auto scanres = diophantine_check(f, scan);
  f.gamma0 = 0.25 * scanres.min_scaled;
  const auto cert = diophantine_check(f, scan);
  f.certified_up_to = cert.certified ? scan : 0;
  return f;
}

}  // namespace kamlie
