#include "simcf/pga.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace simcf {

PartialCascades partial_cascades(const PhaseState& phases,
                                 const PropagationSet& prop, int l) {
  const int layers = phases.num_layers();
  const int n = phases.atoms_per_layer();
  PartialCascades pc;
  pc.suffix.assign(layers, Eigen::MatrixXcd::Identity(n, n));
  pc.prefix.assign(layers, Eigen::MatrixXcd::Identity(n, n));
  for (int m = layers - 1; m >= 1; --m) {
    pc.suffix[m - 1] = pc.suffix[m] *
                       (phases.layer_coeffs(l, m + 1).asDiagonal() *
                        prop.layer_matrix(l, m + 1));
  }
  for (int m = 2; m <= layers; ++m) {
    pc.prefix[m - 1] = prop.layer_matrix(l, m) *
                       (phases.layer_coeffs(l, m - 1).asDiagonal() *
                        pc.prefix[m - 2]);
  }
  return pc;
}

std::vector<Eigen::MatrixXd> grad_sum_rate(const PhaseState& phases,
                                           const ChannelSet& channels,
                                           const PropagationSet& prop,
                                           const AssociationMatrix& A,
                                           const PowerAllocation& P,
                                           double noise_w) {
  const int L = channels.num_aps();
  const int K = channels.num_ues();
  const int U = A.antennas_per_ap();
  const int layers = phases.num_layers();
  const int n_atoms = phases.atoms_per_layer();
  const double log2e = std::numbers::log2e;

  const Eigen::MatrixXcd gains =
      gain_matrix_per_ap(channels, phases, prop, A, P);
  Eigen::VectorXd delta(K), gamma(K);
  for (int k = 0; k < K; ++k) {
    double interf = noise_w;
    for (int j = 0; j < K; ++j)
      if (j != k) interf += std::norm(gains(k, j));
    gamma(k) = std::norm(gains(k, k)) / interf;
    delta(k) = 1.0 / (interf + std::norm(gains(k, k)));
  }

  std::vector<Eigen::MatrixXd> g(L, Eigen::MatrixXd::Zero(layers, n_atoms));
  for (int l = 0; l < L; ++l) {
    const PartialCascades pc = partial_cascades(phases, prop, l);

    // z_j = input_matrix * (amplitudes selected by user j's antennas).
    Eigen::MatrixXcd z(n_atoms, K);
    for (int j = 0; j < K; ++j) {
      Eigen::VectorXcd sel = Eigen::VectorXcd::Zero(U);
      for (int u = 0; u < U; ++u)
        if (A.blocks[l](u, j))
          sel(u) = std::sqrt(std::max(P.p(l, u), 0.0));
      z.col(j) = prop.input_matrix(l) * sel;
    }

    for (int m = 1; m <= layers; ++m) {
      const Eigen::VectorXcd coeffs = phases.layer_coeffs(l, m);
      // v(k, :) = h_{l,k}^H * suffix(m);  y(:, j) = prefix(m) * z_j.
      Eigen::MatrixXcd v(K, n_atoms);
      for (int k = 0; k < K; ++k)
        v.row(k) = channels.h[l][k].adjoint() * pc.suffix_of(m);
      const Eigen::MatrixXcd y = pc.prefix_of(m) * z;

      for (int n = 0; n < n_atoms; ++n) {
        double acc = 0.0;
        for (int k = 0; k < K; ++k) {
          double chi_kk = 0.0, chi_int = 0.0;
          for (int j = 0; j < K; ++j) {
            const std::complex<double> through = coeffs(n) * v(k, n) * y(n, j);
            const double chi =
                2.0 * (std::conj(through) * gains(k, j)).imag();
            if (j == k)
              chi_kk = chi;
            else
              chi_int += chi;
          }
          acc += delta(k) * (chi_kk - gamma(k) * chi_int);
        }
        g[l](m - 1, n) = log2e * acc;
      }
    }
  }
  return g;
}

namespace {

struct AscentOutcome {
  PhaseState phases;
  std::vector<double> trace;
  int accepted = 0;
};

AscentOutcome single_ascent(PhaseState phi, const ChannelSet& channels,
                            const PropagationSet& prop,
                            const AssociationMatrix& A,
                            const PowerAllocation& P, double noise_w,
                            const OptParams& opt) {
  phi.wrap();
  AscentOutcome out;
  double rate = sum_rate(channels, phi, prop, A, P, noise_w).sum_rate;
  out.trace.push_back(rate);

  for (int it = 0; it < opt.pga_max; ++it) {
    const std::vector<Eigen::MatrixXd> g =
        grad_sum_rate(phi, channels, prop, A, P, noise_w);
    for (const auto& gl : g)
      if (!gl.allFinite())
        throw std::runtime_error("pga_optimize: non-finite gradient");

    double eta = opt.pga_init_step;
    bool accepted = false;
    PhaseState cand;
    double cand_rate = rate;
    while (eta >= 1e-12) {
      cand = phi;
      for (int l = 0; l < cand.num_aps(); ++l) cand.phi[l] += eta * g[l];
      cand.wrap();
      cand_rate = sum_rate(channels, cand, prop, A, P, noise_w).sum_rate;
      if (cand_rate > rate) {
        accepted = true;
        break;
      }
      eta *= opt.pga_decay;
    }
    if (!accepted) break;

    const double gain = cand_rate - rate;
    phi = std::move(cand);
    rate = cand_rate;
    out.trace.push_back(rate);
    ++out.accepted;
    if (gain < opt.inner_rel_tol * std::max(std::abs(rate), 1e-12)) break;
  }
  out.phases = std::move(phi);
  return out;
}

}  // namespace

PgaResult pga_optimize(const PhaseState& initial, const ChannelSet& channels,
                       const PropagationSet& prop, const AssociationMatrix& A,
                       const PowerAllocation& P, double noise_w,
                       const ScenarioConfig& cfg, int multistart_count,
                       RngStream* start_rng) {
  if (multistart_count < 1)
    throw std::invalid_argument("pga_optimize: multistart_count must be >= 1");
  if (multistart_count > 1 && start_rng == nullptr)
    throw std::invalid_argument(
        "pga_optimize: multistart_count > 1 needs a start stream");

  PgaResult best;
  long total = 0;
  for (int s = 0; s < multistart_count; ++s) {
    const PhaseState start =
        s == 0 ? initial : random_phases(cfg, *start_rng);
    AscentOutcome out =
        single_ascent(start, channels, prop, A, P, noise_w, cfg.opt);
    total += out.accepted;
    if (s == 0 || out.trace.back() > best.trace.back()) {
      best.phases = std::move(out.phases);
      best.trace = std::move(out.trace);
      best.accepted_iters = out.accepted;
    }
  }
  best.total_iters = total;
  return best;
}

}  // namespace simcf
