#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "kamlie/decay_norm.hpp"

namespace kamlie::test {

/// Random Toeplitz operator on all four sign parts with entries of size
/// scale * <(h, dm)>^{-decay}.
inline ToeplitzOperator random_operator(const GroupSpec& g, int d, int max_label, int radius, double decay,
                                        std::uint64_t seed, double scale = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  ToeplitzOperator M(g, d, max_label);
  for_each_shift(d, radius, [&](const Shift& h) {
    SignBlock& B = M.block(h);
    for (int p = 0; p < 2; ++p)
      for (int q = 0; q < 2; ++q)
        for (int m = 0; m <= max_label; ++m)
          for (int mp = 0; mp <= max_label; ++mp) {
            const double dist = offset_norm(Offset{h, m - mp}, g);
            const double w = scale * std::pow(bracket(dist), -decay);
            B.set(m, sign_of(p), mp, sign_of(q), cplx(nd(rng), nd(rng)) * w);
          }
  });
  return M;
}

inline double max_entry_diff(const ToeplitzOperator& A, const ToeplitzOperator& B) {
  double worst = 0.0;
  auto scan = [&](const ToeplitzOperator& X, const ToeplitzOperator& Y) {
    for (const auto& [h, blk] : X.blocks()) {
      const SignBlock* o = Y.find(h);
      Eigen::MatrixXcd diff = blk.dense();
      if (o) diff -= o->dense();
      if (diff.size()) worst = std::max(worst, diff.cwiseAbs().maxCoeff());
    }
  };
  scan(A, B);
  scan(B, A);
  return worst;
}

}  // namespace kamlie::test
