#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace kamlie {

enum class GroupKind { SU2, SO3 };

/// Dominant-weight lattice of SU(2) or SO(3), central sector.
///
/// Labels are nonnegative integers m with weight j(m) = m * label_step.
/// SO(3) reuses the SU(2) lattice with even SU(2) labels only, so
/// label_step = 2 * rho and the eigenvalues become n(n+1)/2.
struct GroupSpec {
  GroupKind kind = GroupKind::SU2;
  double rho = 0.0;
  double label_step = 0.0;

  static GroupSpec su2();
  static GroupSpec so3();

  double weight(int m) const { return m * label_step; }
  /// SU(2) label of the representation carried by label m.
  int su2_label(int m) const { return kind == GroupKind::SU2 ? m : 2 * m; }
  std::string name() const { return kind == GroupKind::SU2 ? "SU2" : "SO3"; }

  bool operator==(const GroupSpec&) const = default;
};

/// Time-Fourier index l (or shift h = l - l') in Z^d.
using Shift = std::vector<int>;

int inf_norm(const Shift& h);
Shift operator+(const Shift& a, const Shift& b);
Shift operator-(const Shift& a, const Shift& b);
Shift operator-(const Shift& a);
std::string to_string(const Shift& h);

/// Calls f(h) for every h in Z^d with |h|_inf <= radius, lexicographic order.
template <typename F>
void for_each_shift(int d, int radius, F&& f) {
  if (d <= 0 || radius < 0) return;
  Shift h(static_cast<std::size_t>(d), -radius);
  while (true) {
    f(static_cast<const Shift&>(h));
    int p = d - 1;
    while (p >= 0 && h[p] == radius) {
      h[p] = -radius;
      --p;
    }
    if (p < 0) return;
    ++h[p];
  }
}

/// Point k = (l, m, a) of the index set.
struct SiteIndex {
  Shift l;
  int m = 0;
  int a = 1;
};

/// Distance between lattice sites: 1 for the same (l, m) with opposite
/// signs, max(|l - l'|_inf, |j - j'|) otherwise.
double site_distance(const SiteIndex& k, const SiteIndex& kp, const GroupSpec& g);

/// Distance between sites whose time indices differ by h.
double site_distance(const Shift& h, int m, int a, int mp, int ap, const GroupSpec& g);

/// |j + rho|, the per-site Sobolev weight base.
double sobolev_weight(const SiteIndex& k, const GroupSpec& g);
inline double sobolev_weight(int m, const GroupSpec& g) { return g.weight(m) + g.rho; }

struct FrequencyDirection {
  std::vector<double> omega_tilde;
  double gamma0 = 0.0;
  int certified_up_to = 0;

  int dim() const { return static_cast<int>(omega_tilde.size()); }
  double dot(const Shift& l) const;
};

struct DiophantineResult {
  bool certified = false;
  int certified_up_to = 0;
  /// First violating l in scan order, when not certified.
  std::optional<Shift> witness;
  /// min over the scanned range of |omega . l| |l|^d.
  double min_scaled = 0.0;
};

/// Scans 0 < |l|_inf <= L for |omega . l| >= 2 gamma0 |l|^{-d}.
DiophantineResult diophantine_check(const FrequencyDirection& f, int L);

/// omega = (1, sqrt2 - 1, ...) normalised to |omega|_1 = 1. gamma0 is half of
/// the largest admissible value min |omega . l| |l|^d / 2 over |l|_inf <= scan,
/// so the certificate holds with a factor-2 margin.
FrequencyDirection default_frequency(int d, int scan);

}  // namespace kamlie
