#include "kamlie/harmonics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kamlie {

bool CentralFunction::is_real(double tol) const {
  for (const auto& [m, c] : coeffs)
    if (std::abs(c.imag()) > tol) return false;
  return true;
}

cplx CentralFunction::coeff(int m) const {
  auto it = coeffs.find(m);
  return it == coeffs.end() ? cplx{} : it->second;
}

double eigenvalue(int m, const GroupSpec& g) {
  const double j = g.weight(m);
  return j * (j + 2.0 * g.rho);
}

std::vector<int> char_product(int h, int m, const GroupSpec& g) {
  if (h < 0 || m < 0) throw std::invalid_argument("char_product: labels must be nonnegative");
  std::vector<int> out;
  if (g.kind == GroupKind::SU2) {
    const int k_max = std::min(h, m);
    out.reserve(static_cast<std::size_t>(k_max) + 1);
    for (int k = 0; k <= k_max; ++k) out.push_back(h + m - 2 * k);
    return out;
  }
  // SO(3): chi_{2h} chi_{2m} in SU(2) labels, halved back.
  for (int c : char_product(2 * h, 2 * m, GroupSpec::su2())) out.push_back(c / 2);
  return out;
}

CentralFunction multiply(const CentralFunction& b, const CentralFunction& c) {
  CentralFunction out;
  out.group = b.group;
  for (const auto& [h, bh] : b.coeffs)
    for (const auto& [m, cm] : c.coeffs)
      for (int p : char_product(h, m, b.group)) out.coeffs[p] += bh * cm;
  return out;
}

Eigen::MatrixXcd multiplication_matrix(const CentralFunction& b, int max_label) {
  if (max_label < 0) throw std::invalid_argument("multiplication_matrix: negative truncation");
  for (const auto& [h, bh] : b.coeffs) {
    if (h < 0) throw std::invalid_argument("multiplication_matrix: negative label");
    if (h > 2 * max_label && bh != cplx{})
      throw std::invalid_argument("multiplication_matrix: support label " + std::to_string(h) +
                                  " exceeds 2*M_max = " + std::to_string(2 * max_label) +
                                  " (would alias at the truncation edge)");
  }
  const int n = max_label + 1;
  Eigen::MatrixXcd B = Eigen::MatrixXcd::Zero(n, n);
  const GroupSpec& g = b.group;
  for (int m = 0; m < n; ++m) {
    for (int mp = 0; mp < n; ++mp) {
      const int p = g.su2_label(m);
      const int pp = g.su2_label(mp);
      cplx s{};
      for (const auto& [h, bh] : b.coeffs) {
        const int q = g.su2_label(h);
        if (q < std::abs(p - pp) || q > p + pp) continue;
        if ((q - p - pp) % 2 != 0) continue;
        s += bh;
      }
      B(m, mp) = s;
    }
  }
  return B;
}

DecayProfile decay_profile(const Eigen::MatrixXcd& B, const GroupSpec& g) {
  DecayProfile prof;
  const int n = static_cast<int>(B.rows());
  std::vector<double> dist, mag;
  for (int k = 1; k < n; ++k) {
    double mx = 0.0;
    for (int m = 0; m + k < n; ++m)
      mx = std::max({mx, std::abs(B(m + k, m)), std::abs(B(m, m + k))});
    if (mx > 0.0) {
      prof.band_width = k;
      dist.push_back(k * g.label_step);
      mag.push_back(mx);
    }
  }
  if (dist.size() < 2) {
    prof.exact_band = true;
    prof.samples = static_cast<int>(dist.size());
    return prof;
  }
  // Fit in the regime <k step> = k step; below 1 the weight is clipped.
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < dist.size(); ++i)
    if (dist[i] >= 1.0) {
      xs.push_back(-std::log(dist[i]));
      ys.push_back(std::log(mag[i]));
    }
  if (xs.size() < 2) {
    xs.clear();
    ys.clear();
    for (std::size_t i = 0; i < dist.size(); ++i) {
      xs.push_back(-std::log(dist[i]));
      ys.push_back(std::log(mag[i]));
    }
  }
  prof.samples = static_cast<int>(xs.size());
  const double nx = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double den = nx * sxx - sx * sx;
  prof.exponent = den != 0.0 ? (nx * sxy - sx * sy) / den : 0.0;
  prof.log_constant = (sy - prof.exponent * sx) / nx;
  return prof;
}

}  // namespace kamlie
