#include "kamlie/toeplitz.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kamlie {

namespace {

void check_labels(const SignBlock& a, const SignBlock& b) {
  if (a.labels() != b.labels()) throw std::invalid_argument("SignBlock: label truncation mismatch");
}

// Largest <i>^s a block at shift h can carry.
double tail_weight(const Shift& h, const GroupSpec& g, int max_label, double s) {
  const double r = std::max({1.0, static_cast<double>(inf_norm(h)), max_label * g.label_step});
  return std::pow(r, s);
}

}  // namespace

bool SignBlock::empty() const {
  for (const auto& p : parts_)
    if (p.size() != 0) return false;
  return true;
}

Eigen::MatrixXcd& SignBlock::part_mut(int p, int q) {
  auto& m = parts_[2 * p + q];
  if (m.size() == 0) m = Eigen::MatrixXcd::Zero(n_, n_);
  return m;
}

cplx SignBlock::get(int m, int a, int mp, int ap) const {
  const int p = sign_index(a), q = sign_index(ap);
  return has(p, q) ? part(p, q)(m, mp) : cplx{};
}

void SignBlock::set(int m, int a, int mp, int ap, cplx v) {
  const int p = sign_index(a), q = sign_index(ap);
  if (v == cplx{} && !has(p, q)) return;
  part_mut(p, q)(m, mp) = v;
}

Eigen::MatrixXcd SignBlock::dense() const {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(2 * n_, 2 * n_);
  for (int p = 0; p < 2; ++p)
    for (int q = 0; q < 2; ++q)
      if (has(p, q)) out.block(p * n_, q * n_, n_, n_) = part(p, q);
  return out;
}

SignBlock SignBlock::from_dense(const Eigen::MatrixXcd& M, int labels) {
  if (M.rows() != 2 * labels || M.cols() != 2 * labels)
    throw std::invalid_argument("SignBlock::from_dense: wrong size");
  SignBlock b(labels);
  for (int p = 0; p < 2; ++p)
    for (int q = 0; q < 2; ++q) {
      auto sub = M.block(p * labels, q * labels, labels, labels);
      if (sub.cwiseAbs().maxCoeff() > 0.0) b.part_mut(p, q) = sub;
    }
  return b;
}

void SignBlock::add_product(const SignBlock& x, const SignBlock& y) {
  check_labels(x, y);
  for (int p = 0; p < 2; ++p)
    for (int q = 0; q < 2; ++q)
      for (int r = 0; r < 2; ++r)
        if (x.has(p, r) && y.has(r, q)) part_mut(p, q).noalias() += x.part(p, r) * y.part(r, q);
}

SignBlock& SignBlock::operator+=(const SignBlock& o) {
  check_labels(*this, o);
  for (int p = 0; p < 2; ++p)
    for (int q = 0; q < 2; ++q)
      if (o.has(p, q)) part_mut(p, q) += o.part(p, q);
  return *this;
}

SignBlock& SignBlock::operator-=(const SignBlock& o) {
  check_labels(*this, o);
  for (int p = 0; p < 2; ++p)
    for (int q = 0; q < 2; ++q)
      if (o.has(p, q)) part_mut(p, q) -= o.part(p, q);
  return *this;
}

SignBlock& SignBlock::operator*=(cplx s) {
  for (auto& p : parts_)
    if (p.size() != 0) p *= s;
  return *this;
}

double SignBlock::max_abs() const {
  double m = 0.0;
  for (const auto& p : parts_)
    if (p.size() != 0) m = std::max(m, p.cwiseAbs().maxCoeff());
  return m;
}

double SignBlock::frobenius() const {
  double s = 0.0;
  for (const auto& p : parts_)
    if (p.size() != 0) s += p.squaredNorm();
  return std::sqrt(s);
}

double SignBlock::pair_norm(int m, int mp) const {
  // Largest singular value of [[a, b], [c, d]] in closed form.
  const cplx a = has(0, 0) ? part(0, 0)(m, mp) : cplx{};
  const cplx b = has(0, 1) ? part(0, 1)(m, mp) : cplx{};
  const cplx c = has(1, 0) ? part(1, 0)(m, mp) : cplx{};
  const cplx d = has(1, 1) ? part(1, 1)(m, mp) : cplx{};
  if (b == cplx{} && c == cplx{}) return std::max(std::abs(a), std::abs(d));
  const double fro2 = std::norm(a) + std::norm(b) + std::norm(c) + std::norm(d);
  const double det = std::abs(a * d - b * c);
  const double disc = std::sqrt(std::max(0.0, fro2 * fro2 - 4.0 * det * det));
  return std::sqrt(0.5 * (fro2 + disc));
}

ToeplitzOperator ToeplitzOperator::identity(GroupSpec g, int d, int max_label) {
  ToeplitzOperator id(g, d, max_label);
  SignBlock& b = id.block(Shift(static_cast<std::size_t>(d), 0));
  const int n = max_label + 1;
  b.part_mut(0, 0) = Eigen::MatrixXcd::Identity(n, n);
  b.part_mut(1, 1) = Eigen::MatrixXcd::Identity(n, n);
  return id;
}

SignBlock& ToeplitzOperator::block(const Shift& h) {
  if (static_cast<int>(h.size()) != dim_) throw std::invalid_argument("ToeplitzOperator: shift dimension");
  auto it = blocks_.find(h);
  if (it == blocks_.end()) it = blocks_.emplace(h, SignBlock(labels())).first;
  return it->second;
}

const SignBlock* ToeplitzOperator::find(const Shift& h) const {
  auto it = blocks_.find(h);
  return it == blocks_.end() ? nullptr : &it->second;
}

cplx ToeplitzOperator::entry(const Shift& h, int m, int a, int mp, int ap) const {
  const SignBlock* b = find(h);
  return b ? b->get(m, a, mp, ap) : cplx{};
}

void ToeplitzOperator::set_entry(const Shift& h, int m, int a, int mp, int ap, cplx v) {
  block(h).set(m, a, mp, ap, v);
}

void ToeplitzOperator::add_entry(const Shift& h, int m, int a, int mp, int ap, cplx v) {
  SignBlock& b = block(h);
  b.set(m, a, mp, ap, b.get(m, a, mp, ap) + v);
}

int ToeplitzOperator::shift_radius() const {
  int r = 0;
  for (const auto& [h, b] : blocks_) r = std::max(r, inf_norm(h));
  return r;
}

bool ToeplitzOperator::is_zero() const {
  for (const auto& [h, b] : blocks_)
    if (b.max_abs() > 0.0) return false;
  return true;
}

bool ToeplitzOperator::same_shape(const ToeplitzOperator& o) const {
  return group_ == o.group_ && dim_ == o.dim_ && max_label_ == o.max_label_;
}

void ToeplitzOperator::drop_empty() {
  for (auto it = blocks_.begin(); it != blocks_.end();) {
    if (it->second.empty())
      it = blocks_.erase(it);
    else
      ++it;
  }
}

ToeplitzOperator& ToeplitzOperator::operator+=(const ToeplitzOperator& o) {
  if (!same_shape(o)) throw std::invalid_argument("ToeplitzOperator: shape mismatch");
  for (const auto& [h, b] : o.blocks_) block(h) += b;
  return *this;
}

ToeplitzOperator& ToeplitzOperator::operator-=(const ToeplitzOperator& o) {
  if (!same_shape(o)) throw std::invalid_argument("ToeplitzOperator: shape mismatch");
  for (const auto& [h, b] : o.blocks_) block(h) -= b;
  return *this;
}

ToeplitzOperator& ToeplitzOperator::operator*=(cplx s) {
  for (auto& [h, b] : blocks_) b *= s;
  return *this;
}

ToeplitzOperator operator+(ToeplitzOperator a, const ToeplitzOperator& b) { return a += b; }
ToeplitzOperator operator-(ToeplitzOperator a, const ToeplitzOperator& b) { return a -= b; }
ToeplitzOperator operator*(cplx s, ToeplitzOperator a) { return a *= s; }

ToeplitzOperator compose(const ToeplitzOperator& a, const ToeplitzOperator& b, const ComposeOptions& opts) {
  if (!a.same_shape(b)) throw std::invalid_argument("compose: shape mismatch");
  ToeplitzOperator out = a.zero_like();
  const bool skipping = opts.skip_below > 0.0;
  std::vector<double> fa, fb;
  if (skipping || opts.shift_cap >= 0) {
    for (const auto& [h, blk] : a.blocks()) fa.push_back(blk.frobenius());
    for (const auto& [h, blk] : b.blocks()) fb.push_back(blk.frobenius());
  }
  std::size_t ia = 0;
  for (const auto& [ha, ba] : a.blocks()) {
    std::size_t ib = 0;
    for (const auto& [hb, bb] : b.blocks()) {
      Shift h = ha + hb;
      const bool capped = opts.shift_cap >= 0 && inf_norm(h) > opts.shift_cap;
      const bool skipped = !capped && skipping && fa[ia] * fb[ib] < opts.skip_below;
      if (capped || skipped) {
        if (opts.ledger) {
          opts.ledger->dropped_norm +=
              fa[ia] * fb[ib] * tail_weight(h, a.group(), a.max_label(), opts.tail_s);
          (capped ? opts.ledger->capped_pairs : opts.ledger->skipped_pairs) += 1;
        }
      } else {
        out.block(h).add_product(ba, bb);
      }
      ++ib;
    }
    ++ia;
  }
  out.drop_empty();
  return out;
}

ToeplitzOperator commutator(const ToeplitzOperator& a, const ToeplitzOperator& x, const ComposeOptions& opts) {
  ToeplitzOperator out = compose(a, x, opts);
  out -= compose(x, a, opts);
  return out;
}

}  // namespace kamlie
