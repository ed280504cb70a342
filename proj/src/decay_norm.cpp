#include "kamlie/decay_norm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace kamlie {

namespace {

// Profile over dm for one block: prof[dm + M] = max_m |2x2 block(m, m - dm)|.
std::vector<double> label_profile(const SignBlock& b) {
  const int n = b.labels();
  std::vector<double> prof(static_cast<std::size_t>(2 * n - 1), 0.0);
  for (int m = 0; m < n; ++m)
    for (int mp = 0; mp < n; ++mp) {
      const double v = b.pair_norm(m, mp);
      double& slot = prof[static_cast<std::size_t>(m - mp + n - 1)];
      if (v > slot) slot = v;
    }
  return prof;
}

}  // namespace

double offset_norm(const Offset& i, const GroupSpec& g) {
  return std::max(static_cast<double>(inf_norm(i.h)), std::abs(i.dm) * g.label_step);
}

double block_profile(const ToeplitzOperator& M, const Offset& i) {
  const SignBlock* b = M.find(i.h);
  if (!b) return 0.0;
  const int n = M.labels();
  double best = 0.0;
  for (int m = 0; m < n; ++m) {
    const int mp = m - i.dm;
    if (mp < 0 || mp >= n) continue;
    best = std::max(best, b->pair_norm(m, mp));
  }
  return best;
}

double s_norm(const ToeplitzOperator& M, double s) {
  const int n = M.labels();
  const GroupSpec& g = M.group();
  double sum = 0.0;
  for (const auto& [h, b] : M.blocks()) {
    const double hn = inf_norm(h);
    const auto prof = label_profile(b);
    for (int dm = -(n - 1); dm <= n - 1; ++dm) {
      const double p = prof[static_cast<std::size_t>(dm + n - 1)];
      if (p == 0.0) continue;
      const double w = bracket(std::max(hn, std::abs(dm) * g.label_step));
      sum += p * p * std::pow(w, 2.0 * s);
    }
  }
  return std::sqrt(sum);
}

double s_norm(const SignBlock& B, const GroupSpec& g, double s) {
  const int n = B.labels();
  const auto prof = label_profile(B);
  double sum = 0.0;
  for (int dm = -(n - 1); dm <= n - 1; ++dm) {
    const double p = prof[static_cast<std::size_t>(dm + n - 1)];
    sum += p * p * std::pow(bracket(std::abs(dm) * g.label_step), 2.0 * s);
  }
  return std::sqrt(sum);
}

double phase_norm(const Eigen::VectorXcd& v, const GroupSpec& g, double s) {
  const int n = static_cast<int>(v.size()) / 2;
  double sum = 0.0;
  for (int p = 0; p < 2; ++p)
    for (int m = 0; m < n; ++m)
      sum += std::pow(sobolev_weight(m, g), 2.0 * s) * std::norm(v(p * n + m));
  return std::sqrt(sum);
}

LipNorm lip_norm(const ParamFamily& F, double s, double gamma) {
  LipNorm out;
  for (const auto& M : F.samples) out.sup = std::max(out.sup, s_norm(M, s));
  if (F.samples.size() < 2) {
    out.single_sample = true;
    out.value = out.sup;
    return out;
  }
  for (std::size_t i = 0; i + 1 < F.samples.size(); ++i) {
    const double step = std::abs(F.lambdas[i + 1] - F.lambdas[i]);
    out.lip = std::max(out.lip, s_norm(F.samples[i + 1] - F.samples[i], s) / step);
  }
  out.value = out.sup + gamma * out.lip;
  return out;
}

std::pair<ToeplitzOperator, ToeplitzOperator> smooth_project(const ToeplitzOperator& M, double N) {
  if (!(N > 0.0)) throw std::invalid_argument("smooth_project: N must be positive");
  ToeplitzOperator low = M.zero_like(), high = M.zero_like();
  const GroupSpec& g = M.group();
  const int n = M.labels();
  for (const auto& [h, b] : M.blocks()) {
    if (inf_norm(h) > N) {
      high.block(h) = b;
      continue;
    }
    SignBlock lo(n), hi(n);
    for (int p = 0; p < 2; ++p)
      for (int q = 0; q < 2; ++q) {
        if (!b.has(p, q)) continue;
        const auto& src = b.part(p, q);
        for (int m = 0; m < n; ++m)
          for (int mp = 0; mp < n; ++mp) {
            const cplx v = src(m, mp);
            if (v == cplx{}) continue;
            const double dist = site_distance(h, m, sign_of(p), mp, sign_of(q), g);
            (dist <= N ? lo : hi).part_mut(p, q)(m, mp) = v;
          }
      }
    if (!lo.empty()) low.block(h) = std::move(lo);
    if (!hi.empty()) high.block(h) = std::move(hi);
  }
  return {std::move(low), std::move(high)};
}

SignBlock phase_space_slice(const ToeplitzOperator& M, const std::vector<double>& phi) {
  if (static_cast<int>(phi.size()) != M.dim()) throw std::invalid_argument("phase_space_slice: angle dimension");
  SignBlock out(M.labels());
  for (const auto& [h, b] : M.blocks()) {
    double arg = 0.0;
    for (std::size_t i = 0; i < phi.size(); ++i) arg += h[i] * phi[i];
    SignBlock term = b;
    term *= std::polar(1.0, arg);
    out += term;
  }
  return out;
}

void write_operator(std::ostream& os, const ToeplitzOperator& M) {
  os << "# kamlie-operator v1 group=" << M.group().name() << " d=" << M.dim() << " M=" << M.max_label() << "\n";
  char buf[64];
  const int n = M.labels();
  for (const auto& [h, b] : M.blocks())
    for (int p = 0; p < 2; ++p)
      for (int q = 0; q < 2; ++q) {
        if (!b.has(p, q)) continue;
        for (int m = 0; m < n; ++m)
          for (int mp = 0; mp < n; ++mp) {
            const cplx v = b.part(p, q)(m, mp);
            if (v == cplx{}) continue;
            for (int c : h) os << c << ' ';
            os << m << ' ' << sign_of(p) << ' ' << mp << ' ' << sign_of(q) << ' ';
            std::snprintf(buf, sizeof buf, "%a", v.real());
            os << buf << ' ';
            std::snprintf(buf, sizeof buf, "%a", v.imag());
            os << buf << '\n';
          }
      }
}

ToeplitzOperator read_operator(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("# kamlie-operator v1", 0) != 0)
    throw std::runtime_error("read_operator: missing header");
  std::string group;
  int d = -1, M = -1;
  {
    std::istringstream hs(line.substr(20));
    std::string tok;
    while (hs >> tok) {
      if (tok.rfind("group=", 0) == 0) group = tok.substr(6);
      if (tok.rfind("d=", 0) == 0) d = std::stoi(tok.substr(2));
      if (tok.rfind("M=", 0) == 0) M = std::stoi(tok.substr(2));
    }
  }
  if (d < 1 || M < 0 || (group != "SU2" && group != "SO3"))
    throw std::runtime_error("read_operator: malformed header");
  ToeplitzOperator out(group == "SU2" ? GroupSpec::su2() : GroupSpec::so3(), d, M);
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    Shift h(static_cast<std::size_t>(d));
    int m, a, mp, ap;
    std::string re, im;
    for (int& c : h) ls >> c;
    ls >> m >> a >> mp >> ap >> re >> im;
    if (!ls) throw std::runtime_error("read_operator: bad record on line " + std::to_string(lineno));
    out.set_entry(h, m, a, mp, ap, cplx(std::strtod(re.c_str(), nullptr), std::strtod(im.c_str(), nullptr)));
  }
  return out;
}

}  // namespace kamlie
