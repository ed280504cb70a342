#pragma once

#include <array>
#include <complex>
#include <map>

#include <Eigen/Dense>

#include "kamlie/harmonics.hpp"
#include "kamlie/lattice.hpp"

namespace kamlie {

/// Sign index of a = +1 / -1 in block storage.
inline int sign_index(int a) { return a > 0 ? 0 : 1; }
inline int sign_of(int p) { return p == 0 ? 1 : -1; }

/// One time-shift block of a Toeplitz operator, indexed by (m, a) x (m', a').
///
/// Stored as four label x label parts (++, +-, -+, --); an unallocated part
/// is identically zero. Dense views use sign-major order p * labels + m.
class SignBlock {
 public:
  SignBlock() = default;
  explicit SignBlock(int labels) : n_(labels) {}

  int labels() const { return n_; }
  bool has(int p, int q) const { return parts_[2 * p + q].size() != 0; }
  bool empty() const;
  const Eigen::MatrixXcd& part(int p, int q) const { return parts_[2 * p + q]; }
  Eigen::MatrixXcd& part_mut(int p, int q);
  void drop(int p, int q) { parts_[2 * p + q].resize(0, 0); }

  cplx get(int m, int a, int mp, int ap) const;
  void set(int m, int a, int mp, int ap, cplx v);

  Eigen::MatrixXcd dense() const;
  static SignBlock from_dense(const Eigen::MatrixXcd& M, int labels);

  /// this += x * y
  void add_product(const SignBlock& x, const SignBlock& y);

  SignBlock& operator+=(const SignBlock& o);
  SignBlock& operator-=(const SignBlock& o);
  SignBlock& operator*=(cplx s);

  double max_abs() const;
  double frobenius() const;
  /// Spectral norm of the 2x2 block {(m, a), (m', a')}_{a, a'}.
  double pair_norm(int m, int mp) const;

 private:
  int n_ = 0;
  std::array<Eigen::MatrixXcd, 4> parts_;
};

/// Toeplitz-in-time operator on the lattice Z^d x {0..M} x {+, -}.
///
/// The entry between sites (l, m, a) and (l', m', a') is
/// blocks()[l - l'](m, a; m', a'); missing shifts are zero.
class ToeplitzOperator {
 public:
  using BlockMap = std::map<Shift, SignBlock>;

  ToeplitzOperator() = default;
  ToeplitzOperator(GroupSpec g, int d, int max_label) : group_(g), dim_(d), max_label_(max_label) {}

  static ToeplitzOperator identity(GroupSpec g, int d, int max_label);

  const GroupSpec& group() const { return group_; }
  int dim() const { return dim_; }
  int max_label() const { return max_label_; }
  int labels() const { return max_label_ + 1; }

  const BlockMap& blocks() const { return blocks_; }
  BlockMap& blocks() { return blocks_; }
  SignBlock& block(const Shift& h);
  const SignBlock* find(const Shift& h) const;

  cplx entry(const Shift& h, int m, int a, int mp, int ap) const;
  void set_entry(const Shift& h, int m, int a, int mp, int ap, cplx v);
  void add_entry(const Shift& h, int m, int a, int mp, int ap, cplx v);

  /// Largest |h|_inf among stored shifts, 0 if none.
  int shift_radius() const;
  bool is_zero() const;
  bool same_shape(const ToeplitzOperator& o) const;
  ToeplitzOperator zero_like() const { return ToeplitzOperator(group_, dim_, max_label_); }
  void drop_empty();

  ToeplitzOperator& operator+=(const ToeplitzOperator& o);
  ToeplitzOperator& operator-=(const ToeplitzOperator& o);
  ToeplitzOperator& operator*=(cplx s);

 private:
  GroupSpec group_ = GroupSpec::su2();
  int dim_ = 0;
  int max_label_ = 0;
  BlockMap blocks_;
};

ToeplitzOperator operator+(ToeplitzOperator a, const ToeplitzOperator& b);
ToeplitzOperator operator-(ToeplitzOperator a, const ToeplitzOperator& b);
ToeplitzOperator operator*(cplx s, ToeplitzOperator a);

/// Running account of what compositions did not keep.
struct TruncationLedger {
  /// Upper bound on the s-norm of everything dropped (triangle inequality).
  double dropped_norm = 0.0;
  std::size_t capped_pairs = 0;
  std::size_t skipped_pairs = 0;
};

struct ComposeOptions {
  /// Output shifts with |h|_inf above the cap are dropped; negative = no cap.
  int shift_cap = -1;
  /// Block pairs with |A_h1|_F |B_h2|_F below this are not multiplied.
  double skip_below = 0.0;
  /// Sobolev index used for the dropped-mass bound.
  double tail_s = 0.0;
  TruncationLedger* ledger = nullptr;
};

/// Shift-convolution product: out[h] = sum_{h1 + h2 = h} A[h1] B[h2].
ToeplitzOperator compose(const ToeplitzOperator& a, const ToeplitzOperator& b,
                         const ComposeOptions& opts = {});

/// [A, X] = A X - X A.
ToeplitzOperator commutator(const ToeplitzOperator& a, const ToeplitzOperator& x,
                            const ComposeOptions& opts = {});

}  // namespace kamlie
