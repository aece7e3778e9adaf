#include "simcf/power.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace simcf {

namespace {

constexpr double kTiny = 1e-300;

/// Interference-plus-noise seen by user k: sum_{j!=k} |c(k,j)|^2 + noise.
double denom(const Eigen::MatrixXcd& gains, int k, double noise_w) {
  double b = noise_w;
  for (int j = 0; j < gains.cols(); ++j)
    if (j != k) b += std::norm(gains(k, j));
  return b;
}

/// d(surrogate)/d(amps); the masked link rows make each partial a real dot
/// product: d|c(k,j)|^2/dx_i = 2 Re[conj(c) * m_i], d|c|/dx_i the same over
/// |c|.
Eigen::VectorXd surrogate_gradient(const Eigen::VectorXd& t,
                                   const Eigen::VectorXd& amps,
                                   const StackedSystem& s, double noise_w) {
  const int n = static_cast<int>(amps.size());
  const Eigen::MatrixXcd gains = s.gain_matrix(amps);
  Eigen::VectorXd g = Eigen::VectorXd::Zero(n);
  const double log2e = std::numbers::log2e;
  for (int k = 0; k < s.K; ++k) {
    const double b = denom(gains, k, noise_w);
    const double mag = std::abs(gains(k, k));
    const double arg = 1.0 + 2.0 * t(k) * mag - t(k) * t(k) * b;
    if (arg <= 0.0) continue;  // term pinned at -inf boundary; skip
    const double outer = log2e / arg;
    for (int i = 0; i < n; ++i) {
      double inner = 0.0;
      if (s.a_sel[k](i) != 0.0) {
        const std::complex<double> m = s.link_rows(k, i);
        inner += 2.0 * t(k) *
                 (std::conj(gains(k, k)) * m).real() / std::max(mag, 1e-30);
      }
      double interf = 0.0;
      for (int j = 0; j < s.K; ++j) {
        if (j == k || s.a_sel[j](i) == 0.0) continue;
        const std::complex<double> m = s.link_rows(k, i);
        interf += 2.0 * (std::conj(gains(k, j)) * m).real();
      }
      inner -= t(k) * t(k) * interf;
      g(i) += outer * inner;
    }
  }
  return g;
}

}  // namespace

Eigen::VectorXd optimal_t(const Eigen::VectorXd& amps,
                          const StackedSystem& stacked, double noise_w) {
  const Eigen::MatrixXcd gains = stacked.gain_matrix(amps);
  Eigen::VectorXd t(stacked.K);
  for (int k = 0; k < stacked.K; ++k)
    t(k) = std::abs(gains(k, k)) / denom(gains, k, noise_w);
  return t;
}

double surrogate_value(const Eigen::VectorXd& t, const Eigen::VectorXd& amps,
                       const StackedSystem& stacked, double noise_w) {
  const Eigen::MatrixXcd gains = stacked.gain_matrix(amps);
  double total = 0.0;
  for (int k = 0; k < stacked.K; ++k) {
    const double arg = 1.0 + 2.0 * t(k) * std::abs(gains(k, k)) -
                       t(k) * t(k) * denom(gains, k, noise_w);
    if (arg <= 0.0) return -std::numeric_limits<double>::infinity();
    total += std::log2(arg);
  }
  return total;
}

Eigen::VectorXd project_power(Eigen::VectorXd amps, int num_aps,
                              int antennas_per_ap, double p_max_w) {
  amps = amps.cwiseMax(0.0);
  for (int l = 0; l < num_aps; ++l) {
    auto seg = amps.segment(l * antennas_per_ap, antennas_per_ap);
    const double s = seg.squaredNorm();
    if (s > p_max_w) seg *= std::sqrt(p_max_w / s);
  }
  return amps;
}

Eigen::VectorXd update_power(const Eigen::VectorXd& t,
                             const Eigen::VectorXd& amps0,
                             const StackedSystem& stacked, double noise_w,
                             double p_max_w, const OptParams& opt,
                             int* steps_out) {
  int steps = 0;
  if (steps_out) *steps_out = 0;
  Eigen::VectorXd x = project_power(amps0, stacked.L, stacked.U, p_max_w);
  double f = surrogate_value(t, x, stacked, noise_w);
  if (!std::isfinite(f)) return x;  // start outside the surrogate's domain

  const double scale = std::max(std::sqrt(p_max_w), x.lpNorm<Eigen::Infinity>());
  for (int it = 0; it < opt.power_max; ++it) {
    const Eigen::VectorXd g = surrogate_gradient(t, x, stacked, noise_w);
    if (!g.allFinite())
      throw std::runtime_error("update_power: non-finite surrogate gradient");
    const double gn = g.lpNorm<Eigen::Infinity>();
    if (gn < kTiny) break;  // e.g. t = 0: objective constant in amplitudes

    double eta = scale / gn;  // first trial moves about one amplitude scale
    double f_new = f;
    Eigen::VectorXd x_new;
    bool accepted = false;
    while (eta * gn > 1e-16 * scale) {
      Eigen::VectorXd cand =
          project_power(x + eta * g, stacked.L, stacked.U, p_max_w);
      const double fc = surrogate_value(t, cand, stacked, noise_w);
      if (fc > f) {
        x_new = std::move(cand);
        f_new = fc;
        accepted = true;
        break;
      }
      eta *= 0.5;
    }
    if (!accepted) break;
    ++steps;
    const double gain = f_new - f;
    x = std::move(x_new);
    f = f_new;
    if (gain < opt.inner_rel_tol * std::max(std::abs(f), 1e-12)) break;
  }
  if (steps_out) *steps_out = steps;
  return x;
}

std::pair<PowerAllocation, PowerTrace> power_control(
    const PowerAllocation& initial, const StackedSystem& stacked,
    double noise_w, double p_max_w, const OptParams& opt) {
  Eigen::VectorXd x = project_power(power_to_amplitudes(initial), stacked.L,
                                    stacked.U, p_max_w);
  PowerTrace trace;
  double rate = sum_rate_stacked(stacked, x, noise_w).sum_rate;
  trace.sum_rate.push_back(rate);

  for (int outer = 0; outer < opt.power_max; ++outer) {
    const Eigen::VectorXd t = optimal_t(x, stacked, noise_w);
    int steps = 0;
    x = update_power(t, x, stacked, noise_w, p_max_w, opt, &steps);
    trace.inner_iters += steps;
    const double next = sum_rate_stacked(stacked, x, noise_w).sum_rate;
    trace.sum_rate.push_back(next);
    const double gain = next - rate;
    rate = next;
    if (gain < opt.inner_rel_tol * std::max(std::abs(rate), 1e-12)) break;
  }
  trace.outer_iters = static_cast<int>(trace.sum_rate.size()) - 1;
  return {amplitudes_to_power(x, stacked.L, stacked.U), trace};
}

}  // namespace simcf
