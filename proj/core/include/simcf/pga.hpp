#pragma once

#include <Eigen/Dense>
#include <vector>

#include "simcf/rate.hpp"
#include "simcf/rng.hpp"

namespace simcf {

/// Prefix/suffix products of one AP's layer chain.  With the full chain
/// G = Phi_M W_M ... Phi_1, suffix(m) collects the factors to the left of
/// layer m and prefix(m) those to its right:
///   suffix(M) = I,  suffix(m) = suffix(m+1) * Phi_{m+1} * W_{m+1}
///   prefix(1) = I,  prefix(m) = W_m * Phi_{m-1} * prefix(m-1)
/// so that suffix(m) * Phi_m * prefix(m) = G for every layer m.
struct PartialCascades {
  std::vector<Eigen::MatrixXcd> suffix;  // M entries, index m-1 holds layer m
  std::vector<Eigen::MatrixXcd> prefix;  // likewise

  const Eigen::MatrixXcd& suffix_of(int m) const { return suffix.at(m - 1); }
  const Eigen::MatrixXcd& prefix_of(int m) const { return prefix.at(m - 1); }
};

PartialCascades partial_cascades(const PhaseState& phases,
                                 const PropagationSet& prop, int l);

/// Analytic gradient of the sum rate with respect to every phase shift, at
/// fixed powers and association.  Entry (m-1, n) of g[l] is the partial
/// derivative for element n of layer m at AP l.
std::vector<Eigen::MatrixXd> grad_sum_rate(const PhaseState& phases,
                                           const ChannelSet& channels,
                                           const PropagationSet& prop,
                                           const AssociationMatrix& A,
                                           const PowerAllocation& P,
                                           double noise_w);

struct PgaResult {
  PhaseState phases;
  std::vector<double> trace;  // objective at start + each accepted step
                              // (winning start only)
  int accepted_iters = 0;     // winning start's accepted steps
  long total_iters = 0;       // accepted steps across all starts
};

/// Ascent on the phase tensor: steps phi <- wrap(phi + eta * g) with eta
/// found by backtracking from pga_init_step (shrink by pga_decay until the
/// objective strictly increases or eta < 1e-12); stops when the relative
/// gain drops below inner_rel_tol or after pga_max accepted steps.  With
/// multistart_count > 1, additional uniform-random initial states are drawn
/// from start_rng (one draw per extra start, in order) and the best final
/// state wins; ties keep the earliest start.
PgaResult pga_optimize(const PhaseState& initial, const ChannelSet& channels,
                       const PropagationSet& prop, const AssociationMatrix& A,
                       const PowerAllocation& P, double noise_w,
                       const ScenarioConfig& cfg, int multistart_count,
                       RngStream* start_rng);

}  // namespace simcf
