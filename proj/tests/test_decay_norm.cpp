#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "kamlie/decay_norm.hpp"
#include "kamlie/materialize.hpp"
#include "support.hpp"

using namespace kamlie;
using kamlie::test::max_entry_diff;
using kamlie::test::random_operator;

namespace {

const GroupSpec g = GroupSpec::su2();

ToeplitzOperator single(const Shift& h, int m, int a, int mp, int ap, cplx z, int M = 6, int d = 2) {
  ToeplitzOperator op(g, d, M);
  op.set_entry(h, m, a, mp, ap, z);
  return op;
}

// <k> on the lattice box: max(1, |l|_inf, j + rho).
Eigen::VectorXd box_weights(const LatticeBox& box, double s) {
  Eigen::VectorXd w(box.size());
  for (int r = 0; r < box.size(); ++r) {
    const SiteIndex k = box.site(r);
    w(r) = std::pow(std::max({1.0, static_cast<double>(inf_norm(k.l)), sobolev_weight(k.m, g)}), s);
  }
  return w;
}

}  // namespace

TEST_CASE("block profile examples") {
  const ToeplitzOperator I = ToeplitzOperator::identity(g, 2, 5);
  CHECK(block_profile(I, Offset{{0, 0}, 0}) == 1.0);
  CHECK(block_profile(I, Offset{{0, 0}, 1}) == 0.0);
  CHECK(block_profile(I, Offset{{1, 0}, 0}) == 0.0);

  const cplx z(3.0, -4.0);
  const ToeplitzOperator E = single({1, -1}, 4, 1, 2, 1, z);
  CHECK(block_profile(E, Offset{{1, -1}, 2}) == doctest::Approx(5.0));
  CHECK(block_profile(E, Offset{{1, -1}, 1}) == 0.0);
  CHECK(block_profile(E, Offset{{-1, 1}, 2}) == 0.0);

  // same offset, different 2x2 blocks: max
  ToeplitzOperator two = E;
  two.set_entry({1, -1}, 3, 1, 1, 1, 2.0);
  CHECK(block_profile(two, Offset{{1, -1}, 2}) == doctest::Approx(5.0));
  // same 2x2 block: joint spectral norm
  ToeplitzOperator joint = E;
  joint.set_entry({1, -1}, 4, -1, 2, -1, 12.0);
  CHECK(block_profile(joint, Offset{{1, -1}, 2}) == doctest::Approx(12.0));
  joint.set_entry({1, -1}, 4, 1, 2, -1, 12.0);
  Eigen::Matrix2cd blk;
  blk << z, 12.0, 0.0, 12.0;
  const double sv = Eigen::JacobiSVD<Eigen::Matrix2cd>(blk).singularValues()(0);
  CHECK(block_profile(joint, Offset{{1, -1}, 2}) == doctest::Approx(sv).epsilon(1e-14));
}

TEST_CASE("s-norm examples") {
  const ToeplitzOperator I = ToeplitzOperator::identity(g, 2, 5);
  for (double s : {0.0, 1.0, 2.5, 7.0}) CHECK(s_norm(I, s) == doctest::Approx(1.0).epsilon(1e-15));
  const ToeplitzOperator E = single({3, 0}, 1, 1, 0, 1, cplx(0.0, 2.0));
  for (double s : {0.0, 1.0, 2.0, 4.0}) CHECK(s_norm(E, s) == doctest::Approx(2.0 * std::pow(3.0, s)).epsilon(1e-14));
  const ToeplitzOperator R = random_operator(g, 2, 6, 3, 3.0, 5);
  double prev = 0.0;
  for (double s = 0.0; s <= 6.0; s += 0.5) {
    const double v = s_norm(R, s);
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("lip norm") {
  ParamFamily F;
  F.grid_step = 0.1;
  const ToeplitzOperator E = single({0, 0}, 2, 1, 2, 1, 1.0);
  for (int i = 0; i <= 10; ++i) {
    const double lam = 0.5 + 0.1 * i;
    F.lambdas.push_back(lam);
    F.samples.push_back(cplx(lam) * E);
  }
  const LipNorm ln = lip_norm(F, 2.0, 0.01);
  CHECK(ln.sup == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(ln.lip == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ln.value == doctest::Approx(1.51).epsilon(1e-12));
  CHECK(lip_norm(F, 2.0, 0.0).value == ln.sup);

  ParamFamily C = F;
  for (auto& s : C.samples) s = E;
  const LipNorm lc = lip_norm(C, 2.0, 0.5);
  CHECK(lc.lip == 0.0);
  CHECK(lc.value == lc.sup);

  ParamFamily one;
  one.lambdas = {1.0};
  one.samples = {E};
  const LipNorm l1 = lip_norm(one, 2.0, 0.5);
  CHECK(l1.single_sample);
  CHECK(l1.lip == 0.0);
}

TEST_CASE("compose") {
  const ToeplitzOperator B = random_operator(g, 2, 5, 2, 2.0, 11);
  const ToeplitzOperator I = ToeplitzOperator::identity(g, 2, 5);
  CHECK(max_entry_diff(compose(I, B), B) == 0.0);
  CHECK(max_entry_diff(compose(B, I), B) == 0.0);

  const ToeplitzOperator X = single({1, 0}, 3, 1, 2, -1, 2.0, 5);
  const ToeplitzOperator Y = single({0, -2}, 2, -1, 4, 1, cplx(0, 1), 5);
  const ToeplitzOperator XY = compose(X, Y);
  CHECK(XY.blocks().size() == 1);
  CHECK(XY.entry({1, -2}, 3, 1, 4, 1) == cplx(0, 2));
  CHECK(max_entry_diff(XY, single({1, -2}, 3, 1, 4, 1, cplx(0, 2), 5)) == 0.0);
  CHECK(compose(Y, X).is_zero());

  // against the product of materialised matrices on the interior
  const ToeplitzOperator A = random_operator(g, 1, 3, 2, 2.0, 12);
  const ToeplitzOperator C = random_operator(g, 1, 3, 2, 2.0, 13);
  const LatticeBox box(1, 6, 3);
  const Eigen::MatrixXcd prod = Eigen::MatrixXcd(materialize(A, box)) * Eigen::MatrixXcd(materialize(C, box));
  const Eigen::MatrixXcd conv = Eigen::MatrixXcd(materialize(compose(A, C), box));
  const auto rows = box.interior_rows(2);
  double worst = 0.0;
  for (int r : rows)
    for (int c = 0; c < box.size(); ++c) worst = std::max(worst, std::abs(prod(r, c) - conv(r, c)));
  CHECK(worst < 1e-13);
}

TEST_CASE("smooth projection") {
  const ToeplitzOperator M = random_operator(g, 2, 4, 2, 2.0, 21);
  auto [lo, hi] = smooth_project(M, 100.0);
  CHECK(max_entry_diff(lo, M) == 0.0);
  CHECK(hi.is_zero());

  const ToeplitzOperator E = single({5, 0}, 0, 1, 0, 1, 1.0);
  auto [lo5, hi5] = smooth_project(E, 3.0);
  CHECK(lo5.is_zero());
  CHECK(max_entry_diff(hi5, E) == 0.0);
  // label distance counts too
  const ToeplitzOperator F = single({0, 0}, 6, 1, 0, 1, 1.0);
  CHECK(smooth_project(F, 2.0).first.is_zero());
  CHECK(smooth_project(F, 2.2).second.is_zero());
  // opposite signs at the same site are at distance 1
  const ToeplitzOperator S = single({0, 0}, 2, 1, 2, -1, 1.0);
  CHECK(smooth_project(S, 0.5).first.is_zero());
  CHECK(smooth_project(S, 1.0).second.is_zero());

  for (int t = 0; t < 10; ++t) {
    const ToeplitzOperator R = random_operator(g, 2, 8, 5, 1.5, 100 + t);
    auto [l, h] = smooth_project(R, 4.0);
    CHECK(max_entry_diff(l + h, R) == 0.0);
    for (double s : {2.0, 4.0}) CHECK(s_norm(h, s) <= std::pow(4.0, -2.0) * s_norm(R, s + 2.0) * (1 + 1e-14));
  }
}

TEST_CASE("algebra and interpolation with fitted constants") {
  const double s0 = 2.0;
  for (double s : {s0, s0 + 2}) {
    double c_alg = 0.0, c_int = 0.0;
    std::vector<double> alg, inter;
    for (int t = 0; t < 30; ++t) {
      const ToeplitzOperator A = random_operator(g, 2, 6, 2, 3.0, 200 + t);
      const ToeplitzOperator B = random_operator(g, 2, 6, 2, 3.0, 300 + t);
      const double ab = s_norm(compose(A, B), s);
      alg.push_back(ab / (s_norm(A, s) * s_norm(B, s)));
      inter.push_back(ab / (s_norm(A, s0) * s_norm(B, s) + s_norm(A, s) * s_norm(B, s0)));
    }
    c_alg = *std::max_element(alg.begin(), alg.end());
    c_int = *std::max_element(inter.begin(), inter.end());
    const double c_alg_half = *std::max_element(alg.begin(), alg.begin() + 15);
    const double c_int_half = *std::max_element(inter.begin(), inter.begin() + 15);
    CHECK(c_alg <= 2 * c_alg_half);
    CHECK(c_int <= 2 * c_int_half);
    CHECK(std::isfinite(c_alg));
  }
}

TEST_CASE("bounded on the weighted space with a fitted constant") {
  const LatticeBox box(1, 4, 5);
  const double s = 2.0, s0 = 1.5;
  std::vector<double> op_ratio, vec_ratio;
  std::mt19937_64 rng(9);
  std::normal_distribution<double> nd;
  for (int t = 0; t < 16; ++t) {
    const ToeplitzOperator M = random_operator(g, 1, 5, 2, 3.0, 400 + t);
    const Eigen::MatrixXcd A = Eigen::MatrixXcd(materialize(M, box));
    const Eigen::VectorXd w = box_weights(box, s), w0 = box_weights(box, s0);
    const Eigen::MatrixXcd W = w.asDiagonal() * A * w.cwiseInverse().asDiagonal();
    const double opn = Eigen::JacobiSVD<Eigen::MatrixXcd>(W).singularValues()(0);
    op_ratio.push_back(opn / s_norm(M, s));

    Eigen::VectorXcd v(box.size());
    for (int i = 0; i < v.size(); ++i) v(i) = cplx(nd(rng), nd(rng)) / w(i);
    const Eigen::VectorXcd Av = A * v;
    const double lhs = (w.cast<cplx>().cwiseProduct(Av)).norm();
    const double vs = (w.cast<cplx>().cwiseProduct(v)).norm(), vs0 = (w0.cast<cplx>().cwiseProduct(v)).norm();
    vec_ratio.push_back(lhs / (s_norm(M, s0) * vs + s_norm(M, s) * vs0));
  }
  const double c_all = *std::max_element(op_ratio.begin(), op_ratio.end());
  const double c_half = *std::max_element(op_ratio.begin(), op_ratio.begin() + 8);
  CHECK(c_all <= 2 * c_half);
  const double v_all = *std::max_element(vec_ratio.begin(), vec_ratio.end());
  const double v_half = *std::max_element(vec_ratio.begin(), vec_ratio.begin() + 8);
  CHECK(v_all <= 2 * v_half);
}

TEST_CASE("materialize") {
  const LatticeBox box(2, 2, 3);
  CHECK(box.size() == 25 * 4 * 2);
  const SparseOp I = materialize(ToeplitzOperator::identity(g, 2, 3), box);
  CHECK((Eigen::MatrixXcd(I) - Eigen::MatrixXcd::Identity(box.size(), box.size())).norm() == 0.0);

  const LatticeBox tiny(1, 1, 0);
  ToeplitzOperator E(g, 1, 0);
  E.set_entry({1}, 0, 1, 0, 1, 1.0);
  CHECK(materialize(E, tiny).nonZeros() == 2);

  const ToeplitzOperator R = random_operator(g, 2, 3, 2, 2.0, 31);
  const ToeplitzOperator back = read_back(materialize(R, box), box, g, 2);
  CHECK(max_entry_diff(back, R) == 0.0);
}

TEST_CASE("phase space slice") {
  const ToeplitzOperator R = random_operator(g, 2, 3, 2, 2.0, 41);
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(8, 8);
  for (const auto& [h, b] : R.blocks()) sum += b.dense();
  CHECK((phase_space_slice(R, {0.0, 0.0}).dense() - sum).norm() < 1e-13);

  const ToeplitzOperator E = single({2, -1}, 1, 1, 3, -1, cplx(0.5, 0.25), 3);
  const std::vector<double> phi{0.3, 1.1};
  const cplx phase = std::polar(1.0, 2 * 0.3 - 1.1);
  const SignBlock S = phase_space_slice(E, phi);
  CHECK(std::abs(S.get(1, 1, 3, -1) - cplx(0.5, 0.25) * phase) < 1e-15);
  CHECK(S.dense().cwiseAbs().sum() == doctest::Approx(std::abs(cplx(0.5, 0.25))));
}

TEST_CASE("operator dump round trip") {
  const ToeplitzOperator R = random_operator(g, 2, 4, 2, 2.0, 51);
  std::stringstream ss;
  write_operator(ss, R);
  const ToeplitzOperator back = read_operator(ss);
  CHECK(back.max_label() == R.max_label());
  CHECK(back.dim() == R.dim());
  CHECK(max_entry_diff(back, R) == 0.0);
}
