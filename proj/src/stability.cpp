#include "kamlie/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include <boost/numeric/odeint.hpp>

#include "kamlie/decay_norm.hpp"

namespace kamlie {

namespace odeint = boost::numeric::odeint;

namespace {

using State = std::vector<cplx>;

std::vector<double> angles(const std::vector<double>& omega, double t) {
  std::vector<double> phi(omega.size());
  for (std::size_t i = 0; i < omega.size(); ++i) phi[i] = omega[i] * t;
  return phi;
}

cplx phase(const Shift& h, const std::vector<double>& phi) {
  double arg = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) arg += h[i] * phi[i];
  return std::polar(1.0, arg);
}

/// Local error in the weighted s-norm per unit of time, so that the errors
/// of all steps add up to at most `rate` times the span.
struct UnitStepError {
  const std::vector<double>* weight = nullptr;
  double rate = 1.0;

  template <class Algebra>
  double error(Algebra&, const State&, const State&, State& x_err, double dt) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < x_err.size(); ++i) sum += (*weight)[i] * std::norm(x_err[i]);
    return std::sqrt(sum) / (rate * std::abs(dt));
  }
};

}  // namespace

LinearizedField::LinearizedField(const NlsModel& model, double lambda) : n_(model.M_max + 1) {
  for (double w : model.freq.omega_tilde) omega_.push_back(lambda * w);
  const std::vector<double> mu = build_diagonal(model).mu_all();
  diag_.resize(2 * n_);
  for (int m = 0; m < n_; ++m) {
    diag_(m) = cplx(0.0, -mu[static_cast<std::size_t>(m)]);
    diag_(n_ + m) = cplx(0.0, mu[static_cast<std::size_t>(m)]);
  }
  if (model.eps == 0.0) return;
  const ToeplitzOperator T = build_T(model);
  for (const auto& [h, b] : T.blocks()) {
    if (b.empty()) continue;
    shifts_.push_back(h);
    blocks_.push_back(cplx(0.0, model.eps) * b.dense());
  }
}

void LinearizedField::apply(const Eigen::VectorXcd& h, double t, Eigen::VectorXcd& out) const {
  out = diag_.cwiseProduct(h);
  const std::vector<double> phi = angles(omega_, t);
  for (std::size_t k = 0; k < shifts_.size(); ++k) out.noalias() += phase(shifts_[k], phi) * (blocks_[k] * h);
}

Trajectory evolve_linearized(const NlsModel& model, double lambda, const Eigen::VectorXcd& h0, double t_end,
                             double tol, int samples, double t_start, double s0) {
  const LinearizedField field(model, lambda);
  if (h0.size() != field.size()) throw std::invalid_argument("evolve_linearized: state size");
  if (samples < 2) samples = 2;

  Trajectory traj;
  traj.group = model.group;
  traj.s = s0;
  traj.info.tol = tol;
  traj.info.min_step = std::numeric_limits<double>::infinity();

  const int size = field.size();
  Eigen::VectorXcd work(size), dx(size);
  auto sys = [&](const State& x, State& dxdt, double t) {
    work = Eigen::Map<const Eigen::VectorXcd>(x.data(), size);
    field.apply(work, t, dx);
    std::copy(dx.data(), dx.data() + size, dxdt.begin());
  };
  const double span = t_end - t_start;
  std::vector<double> weight(static_cast<std::size_t>(size));
  const int n = size / 2;
  for (int i = 0; i < size; ++i) weight[static_cast<std::size_t>(i)] = std::pow(sobolev_weight(i % n, model.group), 2.0 * s0);
  const double scale = std::max(phase_norm(h0, model.group, s0), std::numeric_limits<double>::min());
  odeint::controlled_runge_kutta<odeint::runge_kutta_dopri5<State>, UnitStepError> stepper(
      UnitStepError{&weight, tol * scale / std::max(std::abs(span), 1e-300)});

  State x(h0.data(), h0.data() + size);
  const double dir = span >= 0.0 ? 1.0 : -1.0;
  // Elapsed time is summed with compensation: millions of steps would
  // otherwise shift the last clipped step by the accumulated rounding.
  double t = t_start, carry = 0.0;
  double dt = dir * std::min(std::abs(span) / samples, 1e-3);
  traj.times.push_back(t);
  traj.states.push_back(h0);
  for (int k = 1; k < samples; ++k) {
    const double target = t_start + span * k / (samples - 1);
    while (dir * (target - t - carry) > 0.0) {
      const bool clipped = dir * (t + carry + dt - target) >= 0.0;
      double step = clipped ? (target - t) - carry : dt;
      const double before = step;
      double t_step = t;
      if (stepper.try_step(sys, x, t_step, step) == odeint::success) {
        ++traj.info.accepted;
        if (!clipped) traj.info.min_step = std::min(traj.info.min_step, std::abs(before));
        traj.info.max_step = std::max(traj.info.max_step, std::abs(before));
        if (clipped) {
          t = target;
          carry = 0.0;
        } else {
          const double y = before + carry;
          const double next = t + y;
          carry = y - (next - t);
          t = next;
          dt = step;
        }
      } else {
        ++traj.info.rejected;
        if (std::abs(step) < std::abs(dt)) dt = step;
      }
      if (std::abs(dt) < 1e-14 * std::max(1.0, std::abs(t))) {
        traj.info.aborted = true;
        traj.info.message = "step size underflow at t = " + std::to_string(t);
        return traj;
      }
    }
    traj.times.push_back(target);
    traj.states.emplace_back(Eigen::Map<const Eigen::VectorXcd>(x.data(), size));
  }
  return traj;
}

Eigen::VectorXcd evolve_reduced(const std::vector<double>& mu, const Eigen::VectorXcd& v0, double t) {
  const Eigen::Index n = static_cast<Eigen::Index>(mu.size());
  if (v0.size() != 2 * n) throw std::invalid_argument("evolve_reduced: state size");
  Eigen::VectorXcd v = v0;
  for (Eigen::Index m = 0; m < n; ++m) {
    const double arg = mu[static_cast<std::size_t>(m)] * t;
    v(m) *= std::polar(1.0, -arg);
    v(n + m) *= std::polar(1.0, arg);
  }
  return v;
}

std::pair<double, double> stability_band(const Trajectory& traj, double s) {
  if (traj.states.empty()) throw std::invalid_argument("stability_band: empty trajectory");
  const double n0 = phase_norm(traj.states.front(), traj.group, s);
  if (n0 == 0.0) throw std::invalid_argument("stability_band: h(0) = 0");
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const auto& h : traj.states) {
    const double r = phase_norm(h, traj.group, s) / n0;
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  return {lo, hi};
}

double pairing_defect(const Eigen::VectorXcd& h) {
  const Eigen::Index n = h.size() / 2;
  return (h.tail(n) - h.head(n).conjugate()).cwiseAbs().maxCoeff();
}

Eigen::VectorXcd paired_state(const GroupSpec& g, int labels, double decay, double s0, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  Eigen::VectorXcd h(2 * labels);
  for (int m = 0; m < labels; ++m) {
    const double w = std::pow(bracket(g.weight(m)), -decay);
    h(m) = w * cplx(nd(rng), nd(rng));
    h(labels + m) = std::conj(h(m));
  }
  return h / phase_norm(h, g, s0);
}

PhaseFunction::PhaseFunction(const ToeplitzOperator& M, double drop_below) : size_(2 * M.labels()) {
  for (const auto& [h, b] : M.blocks()) {
    if (b.empty() || b.frobenius() < drop_below) continue;
    shifts_.push_back(h);
    blocks_.push_back(b.dense());
  }
}

Eigen::VectorXcd PhaseFunction::apply(const std::vector<double>& phi, const Eigen::VectorXcd& v) const {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(size_);
  for (std::size_t k = 0; k < shifts_.size(); ++k) out.noalias() += phase(shifts_[k], phi) * (blocks_[k] * v);
  return out;
}

Eigen::MatrixXcd PhaseFunction::at(const std::vector<double>& phi) const {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(size_, size_);
  for (std::size_t k = 0; k < shifts_.size(); ++k) out += phase(shifts_[k], phi) * blocks_[k];
  return out;
}

ConjugatedFlow::ConjugatedFlow(const ToeplitzOperator& psi, const ToeplitzOperator& psi_inv, std::vector<double> mu_inf,
                               double lambda, const FrequencyDirection& f, const Eigen::VectorXcd& h0,
                               double drop_below)
    : psi_(psi, drop_below), mu_(std::move(mu_inf)) {
  for (double w : f.omega_tilde) omega_.push_back(lambda * w);
  const PhaseFunction inv(psi_inv, drop_below);
  v0_ = inv.apply(std::vector<double>(omega_.size(), 0.0), h0);
}

Eigen::VectorXcd ConjugatedFlow::at(double t) const { return psi_.apply(angles(omega_, t), evolve_reduced(mu_, v0_, t)); }

std::pair<double, double> conjugated_band(const ConjugatedFlow& flow, const GroupSpec& g, double t_end, int samples,
                                          double s) {
  const double n0 = phase_norm(flow.at(0.0), g, s);
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (int k = 0; k < samples; ++k) {
    const double t = samples > 1 ? t_end * k / (samples - 1) : 0.0;
    const double r = phase_norm(flow.at(t), g, s) / n0;
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  return {lo, hi};
}

FlowComparison compare_flows(const Trajectory& direct, const ConjugatedFlow& flow, double residual, double s0,
                             double tol_factor) {
  FlowComparison c;
  c.passed = true;
  const double n0 = phase_norm(direct.states.front(), direct.group, s0);
  double worst_excess = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < direct.times.size(); ++k) {
    const double t = direct.times[k];
    const double diff = phase_norm(direct.states[k] - flow.at(t), direct.group, s0) / n0;
    const double allowed = residual * std::abs(t) + tol_factor * direct.info.tol;
    if (diff > allowed) c.passed = false;
    if (diff - allowed > worst_excess) {
      worst_excess = diff - allowed;
      c.allowed_at_worst = allowed;
      c.worst_time = t;
    }
    c.max_diff = std::max(c.max_diff, diff);
  }
  return c;
}

double transform_error(const ToeplitzOperator& psi_inv, const std::vector<std::vector<double>>& phis,
                       const Eigen::VectorXcd& h, double s) {
  const PhaseFunction inv(psi_inv);
  const GroupSpec& g = psi_inv.group();
  const double nh = phase_norm(h, g, s);
  if (nh == 0.0) throw std::invalid_argument("transform_error: h = 0");
  double worst = 0.0;
  for (const auto& phi : phis) worst = std::max(worst, phase_norm(inv.apply(phi, h) - h, g, s) / nh);
  return worst;
}

}  // namespace kamlie
