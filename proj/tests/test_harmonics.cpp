#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <map>
#include <random>

#include "kamlie/harmonics.hpp"

using namespace kamlie;

namespace {

// Coefficients of b*c collected term by term from the product rule, and the
// matrix of u -> b u built the same way: chi_h chi_m' = sum over the rule.
std::map<int, cplx> product_oracle(const CentralFunction& b, const CentralFunction& c) {
  std::map<int, cplx> out;
  for (const auto& [h, bh] : b.coeffs)
    for (const auto& [m, cm] : c.coeffs)
      for (int k = 0; k <= std::min(h, m); ++k) out[h + m - 2 * k] += bh * cm;
  return out;
}

Eigen::MatrixXcd matrix_oracle(const CentralFunction& b, int M) {
  Eigen::MatrixXcd B = Eigen::MatrixXcd::Zero(M + 1, M + 1);
  for (const auto& [h, bh] : b.coeffs)
    for (int mp = 0; mp <= M; ++mp)
      for (int k = 0; k <= std::min(h, mp); ++k) {
        const int m = h + mp - 2 * k;
        if (m <= M) B(m, mp) += bh;
      }
  return B;
}

CentralFunction random_function(std::mt19937_64& rng, int support, bool real) {
  std::normal_distribution<double> nd;
  CentralFunction f;
  for (int h = 0; h <= support; ++h) f.coeffs[h] = real ? cplx(nd(rng), 0.0) : cplx(nd(rng), nd(rng));
  return f;
}

}  // namespace

TEST_CASE("eigenvalue examples") {
  CHECK(eigenvalue(0, GroupSpec::su2()) == 0.0);
  CHECK(eigenvalue(1, GroupSpec::su2()) == doctest::Approx(3.0 / 8).epsilon(1e-15));
  CHECK(eigenvalue(1, GroupSpec::so3()) == doctest::Approx(1.0).epsilon(1e-15));
  for (int m = 0; m <= 50; ++m) {
    CHECK(eigenvalue(m, GroupSpec::su2()) == doctest::Approx(m * (m + 2) / 8.0).epsilon(1e-14));
    CHECK(eigenvalue(m, GroupSpec::so3()) == doctest::Approx(m * (m + 1) / 2.0).epsilon(1e-14));
    CHECK(std::abs(eigenvalue(m, GroupSpec::su2()) * 8 - m * (m + 2)) < 1e-9);
  }
}

TEST_CASE("character product examples") {
  CHECK(char_product(0, 7) == std::vector<int>{7});
  CHECK(char_product(1, 1) == std::vector<int>{2, 0});
  CHECK(char_product(2, 3) == std::vector<int>{5, 3, 1});
  // SO3 labels n: |h - m| .. h + m
  CHECK(char_product(1, 1, GroupSpec::so3()) == std::vector<int>{2, 1, 0});
}

TEST_CASE("character product bookkeeping") {
  for (int h = 0; h <= 30; ++h)
    for (int m = 0; m <= 30; ++m) {
      const auto p = char_product(h, m);
      CHECK(p == char_product(m, h));
      CHECK(p.size() == static_cast<std::size_t>(std::min(h, m) + 1));
      int dim = 0;
      for (int c : p) dim += c + 1;
      CHECK(dim == (h + 1) * (m + 1));
      int dim3 = 0;
      for (int c : char_product(h, m, GroupSpec::so3())) dim3 += 2 * c + 1;
      CHECK(dim3 == (2 * h + 1) * (2 * m + 1));
    }
}

TEST_CASE("multiplication matrix examples") {
  CentralFunction one;
  one.coeffs[0] = 1.0;
  CHECK(multiplication_matrix(one, 6).isApprox(Eigen::MatrixXcd::Identity(7, 7), 0.0));

  CentralFunction chi1;
  chi1.coeffs[1] = 1.0;
  const Eigen::MatrixXcd B = multiplication_matrix(chi1, 2);
  for (int m = 0; m <= 2; ++m)
    for (int mp = 0; mp <= 2; ++mp) CHECK(B(m, mp) == cplx(std::abs(m - mp) == 1 ? 1.0 : 0.0));
  CHECK(B.isApprox(matrix_oracle(chi1, 2), 0.0));

  CentralFunction b13;
  b13.coeffs[1] = 1.0;
  b13.coeffs[3] = 1.0;
  const Eigen::MatrixXcd B13 = multiplication_matrix(b13, 12);
  for (int m = 0; m <= 12; ++m)
    for (int mp = 0; mp <= 12; ++mp)
      if (std::abs(m - mp) > 3) CHECK(B13(m, mp) == cplx(0.0));

  CentralFunction wide;
  wide.coeffs[9] = 1.0;
  CHECK_THROWS_AS(multiplication_matrix(wide, 4), std::invalid_argument);
  CHECK_NOTHROW(multiplication_matrix(wide, 5));
}

TEST_CASE("multiplication matrix properties") {
  std::mt19937_64 rng(3);
  const int M = 20;
  for (int t = 0; t < 20; ++t) {
    const CentralFunction b = random_function(rng, 4, true), c = random_function(rng, 3, false);
    const Eigen::MatrixXcd Bb = multiplication_matrix(b, M), Bc = multiplication_matrix(c, M);
    CHECK(Bb.isApprox(matrix_oracle(b, M), 1e-15));
    CHECK((Bb - Bb.transpose()).norm() == 0.0);
    CHECK(Bb.imag().norm() == 0.0);

    CentralFunction sum = b;
    for (const auto& [h, v] : c.coeffs) sum.coeffs[h] += 2.0 * v;
    CHECK((multiplication_matrix(sum, M) - Bb - 2.0 * Bc).cwiseAbs().maxCoeff() < 1e-14);

    const CentralFunction bc = multiply(b, c);
    const auto oracle = product_oracle(b, c);
    for (const auto& [h, v] : oracle) CHECK(std::abs(bc.coeff(h) - v) < 1e-13);
    const int safe = M - b.max_label() - c.max_label();
    const Eigen::MatrixXcd lhs = (Bb * Bc).topLeftCorner(safe + 1, safe + 1);
    const Eigen::MatrixXcd rhs = multiplication_matrix(bc, M).topLeftCorner(safe + 1, safe + 1);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("decay profile") {
  CentralFunction chi1;
  chi1.coeffs[1] = 1.0;
  const DecayProfile p1 = decay_profile(multiplication_matrix(chi1, 30), GroupSpec::su2());
  CHECK(p1.exact_band);
  CHECK(p1.band_width == 1);

  const DecayProfile pid = decay_profile(Eigen::MatrixXcd::Identity(10, 10), GroupSpec::su2());
  CHECK(pid.exact_band);
  CHECK(pid.band_width == 0);

  CentralFunction b;
  for (int h = 0; h <= 20; ++h) b.coeffs[h] = std::pow(1.0 + h, -4.0);
  const DecayProfile p = decay_profile(multiplication_matrix(b, 40), GroupSpec::su2());
  CHECK_FALSE(p.exact_band);
  CHECK(p.band_width == 20);
  CHECK(p.exponent >= 3.5);
}
