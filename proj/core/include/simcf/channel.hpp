#pragma once

#include <Eigen/Dense>
#include <complex>
#include <iosfwd>
#include <vector>

#include "simcf/phase.hpp"
#include "simcf/rng.hpp"
#include "simcf/scenario.hpp"

namespace simcf {

/// sin(pi*x)/(pi*x) with exact values at (near-)integer arguments: 1 at 0,
/// 0 at every other integer (snap window 1e-9).
double sinc_normalized(double x);

/// Near-field diffraction coefficient between an element of aperture
/// dx_m-by-dy_m at `from` and a point at `to`, for propagation along +x:
///   (dx*dy*cos_chi / d) * (1/(2*pi*d) - i/lambda) * e^{i*2*pi*d/lambda}
/// where d = |to-from| and cos_chi = (to.x - from.x)/d.  Throws on d = 0.
std::complex<double> diffraction_coeff(const Eigen::Vector3d& from,
                                       const Eigen::Vector3d& to, double dx_m,
                                       double dy_m, double lambda_m);

/// Fixed propagation matrices of the stacked surface.  The local geometry is
/// identical for every AP (offsets shared, layers stacked along local +x), so
/// one copy serves all of them; the accessors keep call sites index-explicit.
struct PropagationSet {
  Eigen::MatrixXcd input;                 // N x U: feed antennas -> layer 1
  std::vector<Eigen::MatrixXcd> between;  // M-1 entries: layer m-1 -> m

  /// Feed-to-first-layer matrix of AP l (N x U).
  const Eigen::MatrixXcd& input_matrix(int) const { return input; }
  /// Layer (m-1)->m matrix of AP l (N x N), m in [2, M].
  const Eigen::MatrixXcd& layer_matrix(int, int m) const {
    return between.at(m - 2);
  }
};

PropagationSet build_propagation(const Layout& layout,
                                 const ScenarioConfig& cfg);

/// Spatial correlation across the final layer's element grid:
/// R(n,n') = sinc_normalized(2 * dist(n,n') / lambda), with a symmetric
/// factor F = V sqrt(max(D,0)) from the eigendecomposition R = V D V^T;
/// eigenvalues below 1e-12 * max are clamped to zero.  F satisfies
/// F F^T = R up to the clamp.
struct CorrelationMatrix {
  Eigen::MatrixXd R;       // N x N
  Eigen::MatrixXd factor;  // N x N, F
};

CorrelationMatrix build_correlation(const Layout& layout,
                                    const ScenarioConfig& cfg);

/// Fading realizations between each AP's final layer and each user:
/// h[l][k] = sqrt(beta(l,k)) * F * z with z iid unit complex normal, where
/// beta(l,k) is the distance-power path gain of the AP-to-user link.
struct ChannelSet {
  std::vector<std::vector<Eigen::VectorXcd>> h;  // [L][K], each length N
  Eigen::MatrixXd beta;                          // L x K path gains

  int num_aps() const { return static_cast<int>(h.size()); }
  int num_ues() const { return h.empty() ? 0 : static_cast<int>(h[0].size()); }
};

/// Draw all L*K fading vectors.  Each (l,k) link consumes its own child
/// stream of `rng` (index l*K + k), so realizations are independent of
/// sampling order and safe to draw concurrently.
ChannelSet sample_channels(const Layout& layout, const ScenarioConfig& cfg,
                           const CorrelationMatrix& corr, RngStream& rng);

/// Layer-by-layer transfer matrix of AP l's surface (N x N):
/// diag(e^{j phi_M}) W_M ... diag(e^{j phi_2}) W_2 diag(e^{j phi_1}).
Eigen::MatrixXcd compute_cascade(const PhaseState& phases,
                                 const PropagationSet& prop, int l);

/// End-to-end U-vector from AP l's feed antennas to user k:
/// input_matrix^H * cascade^H * h[l][k].
Eigen::VectorXcd effective_channel(const ChannelSet& channels,
                                   const PhaseState& phases,
                                   const PropagationSet& prop, int l, int k);

/// Flat text fixture format: a header line, then one record per (l,k) link
/// holding beta followed by interleaved re/im element values.
void dump_channels(const ChannelSet& channels, std::ostream& out);
ChannelSet load_channels(std::istream& in);

}  // namespace simcf
