#pragma once

#include <Eigen/Dense>
#include <vector>

#include "simcf/assoc.hpp"
#include "simcf/channel.hpp"
#include "simcf/phase.hpp"
#include "simcf/scenario.hpp"

namespace simcf {

/// Per-antenna transmit powers in watts: p(l,u).  Feasible when every entry
/// is nonnegative and each AP row sums to at most the power budget.  The
/// amplitude applied on an antenna is sqrt(p).
struct PowerAllocation {
  Eigen::MatrixXd p;  // L x U

  int num_aps() const { return static_cast<int>(p.rows()); }
  int antennas_per_ap() const { return static_cast<int>(p.cols()); }
  bool feasible(double p_max_w, double tol = 1e-12) const;
};

/// Equal split of the per-AP budget: p(l,u) = p_max / U.
PowerAllocation equal_power(const ScenarioConfig& cfg);

/// Flatten to the stacked amplitude vector (length U*L, AP-major):
/// amps(l*U + u) = sqrt(p(l,u)).
Eigen::VectorXd power_to_amplitudes(const PowerAllocation& P);
PowerAllocation amplitudes_to_power(const Eigen::VectorXd& amps, int num_aps,
                                    int antennas_per_ap);

/// Stacked form of the downlink: h columns are the stacked per-user channel
/// vectors (length N*L), Q is the (N*L) x (U*L) block-diagonal matrix with
/// per-AP blocks cascade_l * input_l, a_sel[j] is the 0/1 diagonal antenna
/// selector of user j, and p_vec holds the build-time amplitudes sqrt(p).
/// link_rows caches h_k^H * Q so scalar link gains are cheap dot products.
struct StackedSystem {
  Eigen::MatrixXcd h;                 // (N*L) x K
  Eigen::MatrixXcd Q;                 // (N*L) x (U*L)
  std::vector<Eigen::ArrayXd> a_sel;  // K arrays, each length U*L
  Eigen::VectorXd p_vec;              // U*L amplitudes
  Eigen::MatrixXcd link_rows;         // K x (U*L): row k = h_k^H Q
  int L = 0, U = 0, K = 0, N = 0;

  /// Antenna indices of AP l occupy [l*U, (l+1)*U) of the stacked order.
  int ap_offset(int l) const { return l * U; }

  /// Scalar link gain c(k,j) = h_k^H Q A_sel[j] amps.
  std::complex<double> link_gain(int k, int j,
                                 const Eigen::VectorXd& amps) const;

  /// K x K matrix of link gains at the given amplitudes.
  Eigen::MatrixXcd gain_matrix(const Eigen::VectorXd& amps) const;
};

StackedSystem build_stacked(const ChannelSet& channels,
                            const PhaseState& phases,
                            const PropagationSet& prop,
                            const AssociationMatrix& A,
                            const PowerAllocation& P);

/// Per-user downlink quality at one operating point.
struct RateReport {
  Eigen::VectorXd gamma;  // K, dimensionless
  Eigen::VectorXd rate;   // K, bit/s/Hz: log2(1 + gamma)
  double sum_rate = 0.0;  // bit/s/Hz
};

/// Per-AP route: the 1 x U row h[l][k]^H * cascade_l * input_l, evaluated as
/// a layer-by-layer vector chain (never forms the cascade matrix).
Eigen::RowVectorXcd effective_row(const ChannelSet& channels,
                                  const PhaseState& phases,
                                  const PropagationSet& prop, int l, int k);

/// K x K link-gain matrix via the per-AP route: entry (k,j) sums
/// effective_row(l,k) * diag(sqrt p_l) * a_col_j over APs.
Eigen::MatrixXcd gain_matrix_per_ap(const ChannelSet& channels,
                                    const PhaseState& phases,
                                    const PropagationSet& prop,
                                    const AssociationMatrix& A,
                                    const PowerAllocation& P);

/// Ratio of desired power to interference-plus-noise for one user.
double sinr_from_gains(const Eigen::MatrixXcd& gains, int k, double noise_w);

/// SINR of user k via the per-AP route.
double sinr(int k, const ChannelSet& channels, const PhaseState& phases,
            const PropagationSet& prop, const AssociationMatrix& A,
            const PowerAllocation& P, double noise_w);

/// SINR of user k via the stacked route, at the system's build-time
/// amplitudes (exercises the h/Q/A_sel/p_vec fields directly).
double sinr_stacked(const StackedSystem& s, int k, double noise_w);

RateReport rate_report_from_gains(const Eigen::MatrixXcd& gains,
                                  double noise_w);

/// Full report via the per-AP route.
RateReport sum_rate(const ChannelSet& channels, const PhaseState& phases,
                    const PropagationSet& prop, const AssociationMatrix& A,
                    const PowerAllocation& P, double noise_w);

/// Full report via the stacked route at explicit amplitudes.
RateReport sum_rate_stacked(const StackedSystem& s,
                            const Eigen::VectorXd& amps, double noise_w);

}  // namespace simcf
