#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "simcf/rng.hpp"

namespace simcf {

inline constexpr double kSpeedOfLight = 299'792'458.0;  // m/s

/// Raised for malformed or out-of-range configuration input.  The message
/// always names the offending key/field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caps, tolerances and step-size schedule for the optimizers.
struct OptParams {
  double ao_rel_tol = 1e-3;     // outer alternation: relative gain stop rule
  double inner_rel_tol = 1e-4;  // power stage: relative gain stop rule
  double fd_step = 1e-6;        // finite-difference step for gradient checks
  int ao_max = 20;              // max outer alternation iterations
  int pga_max = 100;            // max surface-phase ascent iterations
  int power_max = 100;          // max power-stage iterations (outer and inner)
  double pga_init_step = 1.0;   // initial ascent step size; backtracking
                                // shrinks it, so err on the large side — at
                                // 0.1 the phase stage cannot converge within
                                // its iteration cap and the outer alternation
                                // crawls
  double pga_decay = 0.5;       // backtracking shrink factor
  int multistart = 4;           // random restarts for the phase ascent
};

/// Full simulation configuration.  Defaults reproduce the desk-scale system:
/// 6 access points with 2 antennas each, 4 users, a 2-layer surface of 5x5
/// elements per layer, 28 GHz carrier, 10 MHz bandwidth.
struct ScenarioConfig {
  // counts
  int num_aps = 6;          // access points (each carries one stacked surface)
  int antennas_per_ap = 2;  // feed antennas per access point
  int num_ues = 4;          // single-antenna users
  int num_layers = 2;       // surface layers per access point
  int atoms_x = 5;          // per-layer element grid, first axis
  int atoms_y = 5;          // per-layer element grid, second axis

  // radio
  double carrier_freq_hz = 28e9;
  double bandwidth_hz = 10e6;
  double noise_density_dbm_hz = -174.0;
  double p_max_w = 0.2;  // per-AP transmit power budget (watts)

  // geometry
  double area_side_m = 200.0;
  double ap_height_m = 15.0;
  double ue_height_m = 1.65;
  double sim_thickness_lambda = 5.0;    // total surface thickness, in wavelengths
  double element_spacing_lambda = 0.5;  // element pitch, in wavelengths

  // path loss
  double pathloss_exponent = 3.5;
  double ref_distance_m = 1.0;

  OptParams opt;
  std::uint64_t seed = 1;

  int atoms_per_layer() const { return atoms_x * atoms_y; }
  double wavelength() const { return kSpeedOfLight / carrier_freq_hz; }
  /// Spacing between adjacent layers; also the feed-to-first-layer distance.
  double layer_gap_m() const {
    return sim_thickness_lambda * wavelength() / num_layers;
  }
  double noise_power_w() const;

  /// Throws ConfigError naming the first violated field.
  void validate() const;
};

/// Strict JSON parse + validate.  Unknown or missing keys raise ConfigError.
ScenarioConfig load_scenario(std::istream& in);
ScenarioConfig load_scenario_file(const std::string& path);

/// Serialize back to the same JSON schema accepted by load_scenario.
std::string scenario_to_json(const ScenarioConfig& cfg);

/// Thermal noise power (watts) from a dBm/Hz density and a bandwidth.
double noise_power(double noise_density_dbm_hz, double bandwidth_hz);

/// Distance-power path gain: gain_at_ref * (d / d_ref)^(-exponent), where
/// gain_at_ref = (wavelength / (4*pi*d_ref))^2.  Requires d > d_ref.
double path_loss(double distance_m, const ScenarioConfig& cfg);

/// Concrete geometry of one trial.
///
/// Every access point uses the same local frame: feed antennas sit in the
/// plane x = 0 (a half-wavelength line array along y, centred, at the AP
/// height), and surface layer m (1-based) is the parallel plane
/// x = m * layer_gap.  Element offsets within a layer plane form a centred
/// atoms_x-by-atoms_y grid in (y, z).  Offsets below are therefore shared by
/// all access points; absolute positions are ap_position + offset.
struct Layout {
  std::vector<Eigen::Vector3d> ap_positions;     // size L, z = ap_height
  std::vector<Eigen::Vector3d> ue_positions;     // size K, z = ue_height
  std::vector<Eigen::Vector3d> antenna_offsets;  // size U, in-plane (0, y, 0)
  std::vector<Eigen::Vector3d> atom_offsets;     // size N, in-plane (0, y, z)
  double layer_gap_m = 0.0;

  Eigen::Vector3d antenna_position(int l, int u) const {
    return ap_positions.at(l) + antenna_offsets.at(u);
  }
  /// Absolute position of element n on layer m (1-based) of access point l.
  Eigen::Vector3d atom_position(int l, int m, int n) const {
    Eigen::Vector3d p = ap_positions.at(l) + atom_offsets.at(n);
    p.x() += m * layer_gap_m;
    return p;
  }
};

/// Draw AP/user drop positions for one trial.  AP and user coordinates come
/// from separate purpose-tagged streams, so the AP drop does not depend on
/// the number of users and vice versa.
Layout build_scenario(const ScenarioConfig& cfg, std::uint64_t trial);

}  // namespace simcf
