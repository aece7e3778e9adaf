#include "simcf/phase.hpp"

#include <cmath>
#include <numbers>

namespace simcf {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

double phase_wrap(double radians) {
  double w = std::fmod(radians, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  // fmod of a negative value can round back up to the period itself.
  if (w >= kTwoPi) w = 0.0;
  return w;
}

void PhaseState::wrap() {
  for (auto& m : phi) {
    m = m.unaryExpr([](double v) { return phase_wrap(v); });
  }
}

Eigen::VectorXcd PhaseState::layer_coeffs(int l, int m) const {
  const Eigen::MatrixXd& p = phi.at(l);
  const int n = static_cast<int>(p.cols());
  Eigen::VectorXcd c(n);
  for (int i = 0; i < n; ++i) {
    c(i) = std::polar(1.0, phase_wrap(p(m - 1, i)));
  }
  return c;
}

PhaseState zero_phases(const ScenarioConfig& cfg) {
  PhaseState s;
  s.phi.assign(cfg.num_aps,
               Eigen::MatrixXd::Zero(cfg.num_layers, cfg.atoms_per_layer()));
  return s;
}

PhaseState random_phases(const ScenarioConfig& cfg, RngStream& rng) {
  PhaseState s;
  s.phi.reserve(cfg.num_aps);
  for (int l = 0; l < cfg.num_aps; ++l) {
    Eigen::MatrixXd m(cfg.num_layers, cfg.atoms_per_layer());
    for (int row = 0; row < m.rows(); ++row)
      for (int col = 0; col < m.cols(); ++col)
        m(row, col) = rng.next_uniform(0.0, kTwoPi);
    s.phi.push_back(std::move(m));
  }
  return s;
}

}  // namespace simcf
