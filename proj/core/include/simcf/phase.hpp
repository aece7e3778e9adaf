#pragma once

#include <Eigen/Dense>
#include <vector>

#include "simcf/rng.hpp"
#include "simcf/scenario.hpp"

namespace simcf {

/// Canonical representative of an angle in [0, 2*pi).
double phase_wrap(double radians);

/// Per-AP surface phase configuration: phi[l] is an M-by-N matrix of phase
/// shifts in radians, row m-1 holding layer m.  Unit-modulus transmission
/// coefficients are e^{j*phi}; coefficients are always computed from the
/// wrapped angle, so wrapping a state never changes any coefficient.
struct PhaseState {
  std::vector<Eigen::MatrixXd> phi;

  int num_aps() const { return static_cast<int>(phi.size()); }
  int num_layers() const { return phi.empty() ? 0 : static_cast<int>(phi[0].rows()); }
  int atoms_per_layer() const {
    return phi.empty() ? 0 : static_cast<int>(phi[0].cols());
  }

  /// Wrap every entry into [0, 2*pi).
  void wrap();

  /// Unit-modulus coefficients e^{j*phi} for layer m (1-based) of AP l.
  Eigen::VectorXcd layer_coeffs(int l, int m) const;
};

/// All-zero phases (coefficients equal to 1).
PhaseState zero_phases(const ScenarioConfig& cfg);

/// Independent uniform draws in [0, 2*pi) for every element, consumed from
/// `rng` in (l, layer-row-major) order.
PhaseState random_phases(const ScenarioConfig& cfg, RngStream& rng);

}  // namespace simcf
