#pragma once

// Shared builders and oracles for the unit and acceptance suites.

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "simcf/assoc.hpp"
#include "simcf/channel.hpp"
#include "simcf/pga.hpp"
#include "simcf/power.hpp"
#include "simcf/rate.hpp"
#include "simcf/rng.hpp"
#include "simcf/scenario.hpp"

namespace simcf_test {

/// Desk radio parameters with adjustable counts.
inline simcf::ScenarioConfig tiny_config(int L, int U, int K, int M, int nx,
                                         int ny, std::uint64_t seed = 1) {
  simcf::ScenarioConfig cfg;
  cfg.num_aps = L;
  cfg.antennas_per_ap = U;
  cfg.num_ues = K;
  cfg.num_layers = M;
  cfg.atoms_x = nx;
  cfg.atoms_y = ny;
  cfg.seed = seed;
  return cfg;
}

/// Fully materialized trial: geometry, matrices, fading, association.
struct Instance {
  simcf::ScenarioConfig cfg;
  simcf::Layout layout;
  simcf::PropagationSet prop;
  simcf::CorrelationMatrix corr;
  simcf::ChannelSet channels;
  simcf::DistanceTensor dist;
  simcf::AssociationMatrix assoc;
  simcf::PowerAllocation power;
  simcf::PhaseState phases;
  double noise_w = 0.0;
};

inline Instance make_instance(const simcf::ScenarioConfig& cfg,
                              std::uint64_t trial = 0) {
  Instance in;
  in.cfg = cfg;
  in.layout = simcf::build_scenario(cfg, trial);
  in.prop = simcf::build_propagation(in.layout, cfg);
  in.corr = simcf::build_correlation(in.layout, cfg);
  simcf::RngStream rng(cfg.seed, trial, "channels");
  in.channels = simcf::sample_channels(in.layout, cfg, in.corr, rng);
  in.dist = simcf::distance_tensor(in.layout);
  in.assoc = simcf::aga(in.dist);
  in.power = simcf::equal_power(cfg);
  simcf::RngStream phase_rng(cfg.seed, trial, "phase-init");
  in.phases = simcf::random_phases(cfg, phase_rng);
  in.noise_w = cfg.noise_power_w();
  return in;
}

/// Random feasible power point: uniform amplitudes projected onto the
/// per-AP ball.
inline simcf::PowerAllocation random_power(const simcf::ScenarioConfig& cfg,
                                           simcf::RngStream& rng) {
  const int L = cfg.num_aps, U = cfg.antennas_per_ap;
  Eigen::VectorXd amps(L * U);
  const double scale = std::sqrt(cfg.p_max_w);
  for (int i = 0; i < amps.size(); ++i)
    amps(i) = rng.next_uniform(0.0, scale);
  amps = simcf::project_power(amps, L, U, cfg.p_max_w);
  return simcf::amplitudes_to_power(amps, L, U);
}

/// Central finite differences of the sum rate in every phase coordinate.
inline std::vector<Eigen::MatrixXd> fd_gradient(
    const simcf::PhaseState& phases, const Instance& in, double step) {
  std::vector<Eigen::MatrixXd> g;
  g.reserve(phases.phi.size());
  simcf::PhaseState probe = phases;
  for (int l = 0; l < phases.num_aps(); ++l) {
    Eigen::MatrixXd gl(phases.num_layers(), phases.atoms_per_layer());
    for (int m = 0; m < phases.num_layers(); ++m) {
      for (int n = 0; n < phases.atoms_per_layer(); ++n) {
        const double saved = probe.phi[l](m, n);
        probe.phi[l](m, n) = saved + step;
        const double up = simcf::sum_rate(in.channels, probe, in.prop,
                                          in.assoc, in.power, in.noise_w)
                              .sum_rate;
        probe.phi[l](m, n) = saved - step;
        const double down = simcf::sum_rate(in.channels, probe, in.prop,
                                            in.assoc, in.power, in.noise_w)
                                .sum_rate;
        probe.phi[l](m, n) = saved;
        gl(m, n) = (up - down) / (2.0 * step);
      }
    }
    g.push_back(std::move(gl));
  }
  return g;
}

/// Worst disagreement between two gradients, relative to the gradients'
/// overall scale (their joint max-norm).  Normalizing per entry would
/// divide finite-difference roundoff by near-zero components and report
/// noise; normalizing by the scale still flags any structural error (a
/// wrong sign or missing term shows up at O(1) of the scale).
inline double max_grad_rel_err(const std::vector<Eigen::MatrixXd>& a,
                               const std::vector<Eigen::MatrixXd>& b) {
  double scale = 0.0, diff = 0.0;
  for (size_t l = 0; l < a.size(); ++l) {
    scale = std::max(
        {scale, a[l].cwiseAbs().maxCoeff(), b[l].cwiseAbs().maxCoeff()});
    diff = std::max(diff, (a[l] - b[l]).cwiseAbs().maxCoeff());
  }
  return scale > 0.0 ? diff / scale : diff;
}

/// Interference-free cap on the sum rate at full per-AP power: no phase
/// configuration can beat sum_k log2(1 + S_k_max / noise) where S_k_max
/// bounds user k's received amplitude through operator norms.
inline double sum_rate_upper_bound(const Instance& in) {
  const int L = in.cfg.num_aps, K = in.cfg.num_ues;
  double chain = 1.0;
  {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(in.prop.input);
    chain *= svd.singularValues()(0);
  }
  for (const auto& w : in.prop.between) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(w);
    chain *= svd.singularValues()(0);
  }
  double total = 0.0;
  for (int k = 0; k < K; ++k) {
    double amp = 0.0;
    for (int l = 0; l < L; ++l)
      amp += in.channels.h[l][k].norm() * chain * std::sqrt(in.cfg.p_max_w);
    total += std::log2(1.0 + amp * amp / in.noise_w);
  }
  return total;
}

/// Trace is non-decreasing up to the given absolute slack.
inline bool non_decreasing(const std::vector<double>& trace,
                           double slack = 1e-9) {
  for (size_t i = 1; i < trace.size(); ++i)
    if (trace[i] < trace[i - 1] - slack) return false;
  return true;
}

}  // namespace simcf_test
