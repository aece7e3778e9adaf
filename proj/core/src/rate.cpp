#include "simcf/rate.hpp"

#include <cmath>
#include <stdexcept>

namespace simcf {

bool PowerAllocation::feasible(double p_max_w, double tol) const {
  for (int l = 0; l < p.rows(); ++l) {
    double sum = 0.0;
    for (int u = 0; u < p.cols(); ++u) {
      if (p(l, u) < -tol) return false;
      sum += p(l, u);
    }
    if (sum > p_max_w + tol) return false;
  }
  return true;
}

PowerAllocation equal_power(const ScenarioConfig& cfg) {
  PowerAllocation P;
  P.p = Eigen::MatrixXd::Constant(cfg.num_aps, cfg.antennas_per_ap,
                                  cfg.p_max_w / cfg.antennas_per_ap);
  return P;
}

Eigen::VectorXd power_to_amplitudes(const PowerAllocation& P) {
  const int L = P.num_aps(), U = P.antennas_per_ap();
  Eigen::VectorXd amps(L * U);
  for (int l = 0; l < L; ++l)
    for (int u = 0; u < U; ++u)
      amps(l * U + u) = std::sqrt(std::max(P.p(l, u), 0.0));
  return amps;
}

PowerAllocation amplitudes_to_power(const Eigen::VectorXd& amps, int num_aps,
                                    int antennas_per_ap) {
  if (amps.size() != static_cast<long>(num_aps) * antennas_per_ap)
    throw std::invalid_argument("amplitudes_to_power: dimension mismatch");
  PowerAllocation P;
  P.p.resize(num_aps, antennas_per_ap);
  for (int l = 0; l < num_aps; ++l)
    for (int u = 0; u < antennas_per_ap; ++u) {
      const double a = amps(l * antennas_per_ap + u);
      P.p(l, u) = a * a;
    }
  return P;
}

std::complex<double> StackedSystem::link_gain(
    int k, int j, const Eigen::VectorXd& amps) const {
  std::complex<double> c = 0.0;
  const auto& row = link_rows;
  const auto& sel = a_sel.at(j);
  for (int i = 0; i < row.cols(); ++i) {
    if (sel(i) != 0.0) c += row(k, i) * amps(i);
  }
  return c;
}

Eigen::MatrixXcd StackedSystem::gain_matrix(const Eigen::VectorXd& amps) const {
  Eigen::MatrixXcd g(K, K);
  for (int k = 0; k < K; ++k)
    for (int j = 0; j < K; ++j) g(k, j) = link_gain(k, j, amps);
  return g;
}

StackedSystem build_stacked(const ChannelSet& channels,
                            const PhaseState& phases,
                            const PropagationSet& prop,
                            const AssociationMatrix& A,
                            const PowerAllocation& P) {
  StackedSystem s;
  s.L = channels.num_aps();
  s.K = channels.num_ues();
  s.U = A.antennas_per_ap();
  s.N = s.L > 0 && s.K > 0 ? static_cast<int>(channels.h[0][0].size()) : 0;
  if (A.num_aps() != s.L || A.num_ues() != s.K ||
      P.num_aps() != s.L || P.antennas_per_ap() != s.U ||
      phases.num_aps() != s.L ||
      prop.input.rows() != s.N || prop.input.cols() != s.U)
    throw std::invalid_argument("build_stacked: dimension mismatch");

  const int NL = s.N * s.L, UL = s.U * s.L;
  s.h = Eigen::MatrixXcd::Zero(NL, s.K);
  s.Q = Eigen::MatrixXcd::Zero(NL, UL);
  for (int l = 0; l < s.L; ++l) {
    const Eigen::MatrixXcd g = compute_cascade(phases, prop, l);
    s.Q.block(l * s.N, l * s.U, s.N, s.U) = g * prop.input_matrix(l);
    for (int k = 0; k < s.K; ++k)
      s.h.block(l * s.N, k, s.N, 1) = channels.h[l][k];
  }
  s.a_sel.reserve(s.K);
  for (int j = 0; j < s.K; ++j) {
    Eigen::ArrayXd sel = Eigen::ArrayXd::Zero(UL);
    for (int l = 0; l < s.L; ++l)
      for (int u = 0; u < s.U; ++u)
        sel(l * s.U + u) = static_cast<double>(A.blocks[l](u, j));
    s.a_sel.push_back(std::move(sel));
  }
  s.p_vec = power_to_amplitudes(P);
  s.link_rows = s.h.adjoint() * s.Q;
  return s;
}

Eigen::RowVectorXcd effective_row(const ChannelSet& channels,
                                  const PhaseState& phases,
                                  const PropagationSet& prop, int l, int k) {
  // h^H (Phi_M W_M ... Phi_1) W_input, folded left to right.
  Eigen::RowVectorXcd r = channels.h.at(l).at(k).adjoint();
  const int layers = phases.num_layers();
  for (int m = layers; m >= 1; --m) {
    r = r.cwiseProduct(phases.layer_coeffs(l, m).transpose());
    if (m > 1) r = r * prop.layer_matrix(l, m);
  }
  return r * prop.input_matrix(l);
}

Eigen::MatrixXcd gain_matrix_per_ap(const ChannelSet& channels,
                                    const PhaseState& phases,
                                    const PropagationSet& prop,
                                    const AssociationMatrix& A,
                                    const PowerAllocation& P) {
  const int L = channels.num_aps();
  const int K = channels.num_ues();
  const int U = A.antennas_per_ap();
  Eigen::MatrixXcd gains = Eigen::MatrixXcd::Zero(K, K);
  for (int l = 0; l < L; ++l) {
    Eigen::VectorXd amp(U);
    for (int u = 0; u < U; ++u) amp(u) = std::sqrt(std::max(P.p(l, u), 0.0));
    for (int k = 0; k < K; ++k) {
      const Eigen::RowVectorXcd row = effective_row(channels, phases, prop, l, k);
      for (int j = 0; j < K; ++j) {
        std::complex<double> c = 0.0;
        for (int u = 0; u < U; ++u)
          if (A.blocks[l](u, j)) c += row(u) * amp(u);
        gains(k, j) += c;
      }
    }
  }
  return gains;
}

double sinr_from_gains(const Eigen::MatrixXcd& gains, int k, double noise_w) {
  const int K = static_cast<int>(gains.cols());
  double interference = 0.0;
  for (int j = 0; j < K; ++j)
    if (j != k) interference += std::norm(gains(k, j));
  return std::norm(gains(k, k)) / (interference + noise_w);
}

double sinr(int k, const ChannelSet& channels, const PhaseState& phases,
            const PropagationSet& prop, const AssociationMatrix& A,
            const PowerAllocation& P, double noise_w) {
  return sinr_from_gains(gain_matrix_per_ap(channels, phases, prop, A, P), k,
                         noise_w);
}

double sinr_stacked(const StackedSystem& s, int k, double noise_w) {
  double interference = 0.0;
  for (int j = 0; j < s.K; ++j)
    if (j != k) interference += std::norm(s.link_gain(k, j, s.p_vec));
  return std::norm(s.link_gain(k, k, s.p_vec)) / (interference + noise_w);
}

RateReport rate_report_from_gains(const Eigen::MatrixXcd& gains,
                                  double noise_w) {
  const int K = static_cast<int>(gains.cols());
  RateReport r;
  r.gamma.resize(K);
  r.rate.resize(K);
  for (int k = 0; k < K; ++k) {
    r.gamma(k) = sinr_from_gains(gains, k, noise_w);
    r.rate(k) = std::log2(1.0 + r.gamma(k));
  }
  r.sum_rate = r.rate.sum();
  return r;
}

RateReport sum_rate(const ChannelSet& channels, const PhaseState& phases,
                    const PropagationSet& prop, const AssociationMatrix& A,
                    const PowerAllocation& P, double noise_w) {
  return rate_report_from_gains(
      gain_matrix_per_ap(channels, phases, prop, A, P), noise_w);
}

RateReport sum_rate_stacked(const StackedSystem& s,
                            const Eigen::VectorXd& amps, double noise_w) {
  return rate_report_from_gains(s.gain_matrix(amps), noise_w);
}

}  // namespace simcf
