#include "simcf/channel.hpp"

#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace simcf {

namespace {
constexpr double kPi = std::numbers::pi;
}

double sinc_normalized(double x) {
  const double r = std::round(x);
  if (std::abs(x - r) < 1e-9) {
    return r == 0.0 ? 1.0 : 0.0;
  }
  return std::sin(kPi * x) / (kPi * x);
}

std::complex<double> diffraction_coeff(const Eigen::Vector3d& from,
                                       const Eigen::Vector3d& to, double dx_m,
                                       double dy_m, double lambda_m) {
  const Eigen::Vector3d diff = to - from;
  const double d = diff.norm();
  if (d <= 0.0)
    throw std::invalid_argument(
        "diffraction_coeff: zero distance between source and target");
  const double cos_chi = diff.x() / d;
  const std::complex<double> radial(1.0 / (2.0 * kPi * d), -1.0 / lambda_m);
  const std::complex<double> phase = std::polar(1.0, 2.0 * kPi * d / lambda_m);
  return (dx_m * dy_m * cos_chi / d) * radial * phase;
}

PropagationSet build_propagation(const Layout& layout,
                                 const ScenarioConfig& cfg) {
  const double lam = cfg.wavelength();
  const double pitch = cfg.element_spacing_lambda * lam;
  const int n_atoms = cfg.atoms_per_layer();
  const int n_ant = cfg.antennas_per_ap;
  const double gap = layout.layer_gap_m;

  PropagationSet prop;
  prop.input.resize(n_atoms, n_ant);
  for (int n = 0; n < n_atoms; ++n) {
    // Layer-1 element n sits one gap in front of the antenna plane.
    Eigen::Vector3d atom = layout.atom_offsets.at(n);
    atom.x() += gap;
    for (int u = 0; u < n_ant; ++u) {
      prop.input(n, u) = diffraction_coeff(layout.antenna_offsets.at(u), atom,
                                           pitch, pitch, lam);
    }
  }

  prop.between.reserve(std::max(cfg.num_layers - 1, 0));
  for (int m = 2; m <= cfg.num_layers; ++m) {
    Eigen::MatrixXcd w(n_atoms, n_atoms);
    for (int n = 0; n < n_atoms; ++n) {        // receiving element, layer m
      for (int np = 0; np < n_atoms; ++np) {   // emitting element, layer m-1
        Eigen::Vector3d src = layout.atom_offsets.at(np);
        Eigen::Vector3d dst = layout.atom_offsets.at(n);
        dst.x() += gap;
        w(n, np) = diffraction_coeff(src, dst, pitch, pitch, lam);
      }
    }
    prop.between.push_back(std::move(w));
  }
  return prop;
}

CorrelationMatrix build_correlation(const Layout& layout,
                                    const ScenarioConfig& cfg) {
  const double lam = cfg.wavelength();
  const int n_atoms = static_cast<int>(layout.atom_offsets.size());

  CorrelationMatrix corr;
  corr.R.resize(n_atoms, n_atoms);
  for (int a = 0; a < n_atoms; ++a) {
    for (int b = 0; b < n_atoms; ++b) {
      const double d = (layout.atom_offsets[a] - layout.atom_offsets[b]).norm();
      corr.R(a, b) = sinc_normalized(2.0 * d / lam);
    }
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(corr.R);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("build_correlation: eigendecomposition failed");
  Eigen::VectorXd evals = es.eigenvalues();
  const double clamp = 1e-12 * evals.maxCoeff();
  for (int i = 0; i < evals.size(); ++i) {
    evals(i) = evals(i) < clamp ? 0.0 : evals(i);
  }
  corr.factor = es.eigenvectors() * evals.cwiseSqrt().asDiagonal();
  return corr;
}

ChannelSet sample_channels(const Layout& layout, const ScenarioConfig& cfg,
                           const CorrelationMatrix& corr, RngStream& rng) {
  const int n_atoms = cfg.atoms_per_layer();
  const int L = cfg.num_aps;
  const int K = cfg.num_ues;

  ChannelSet set;
  set.beta.resize(L, K);
  set.h.assign(L, std::vector<Eigen::VectorXcd>(K));
  for (int l = 0; l < L; ++l) {
    for (int k = 0; k < K; ++k) {
      const double dist =
          (layout.ap_positions.at(l) - layout.ue_positions.at(k)).norm();
      const double beta = path_loss(dist, cfg);
      set.beta(l, k) = beta;

      RngStream link = rng.child(static_cast<std::uint64_t>(l) * K + k);
      Eigen::VectorXcd z(n_atoms);
      for (int n = 0; n < n_atoms; ++n) z(n) = link.next_cnormal();
      set.h[l][k] = std::sqrt(beta) * (corr.factor * z);
    }
  }
  return set;
}

Eigen::MatrixXcd compute_cascade(const PhaseState& phases,
                                 const PropagationSet& prop, int l) {
  const int layers = phases.num_layers();
  Eigen::MatrixXcd g = phases.layer_coeffs(l, 1).asDiagonal();
  for (int m = 2; m <= layers; ++m) {
    g = prop.layer_matrix(l, m) * g;
    g = phases.layer_coeffs(l, m).asDiagonal() * g;
  }
  return g;
}

Eigen::VectorXcd effective_channel(const ChannelSet& channels,
                                   const PhaseState& phases,
                                   const PropagationSet& prop, int l, int k) {
  const Eigen::MatrixXcd g = compute_cascade(phases, prop, l);
  const Eigen::VectorXcd through = g.adjoint() * channels.h.at(l).at(k);
  return prop.input_matrix(l).adjoint() * through;
}

void dump_channels(const ChannelSet& channels, std::ostream& out) {
  const int L = channels.num_aps();
  const int K = channels.num_ues();
  const int N = L > 0 && K > 0 ? static_cast<int>(channels.h[0][0].size()) : 0;
  out << "simcf-channels 1\n" << L << ' ' << K << ' ' << N << '\n';
  out.precision(std::numeric_limits<double>::max_digits10);
  for (int l = 0; l < L; ++l) {
    for (int k = 0; k < K; ++k) {
      out << l << ' ' << k << ' ' << channels.beta(l, k);
      const Eigen::VectorXcd& h = channels.h[l][k];
      for (int n = 0; n < N; ++n) {
        out << ' ' << h(n).real() << ' ' << h(n).imag();
      }
      out << '\n';
    }
  }
}

ChannelSet load_channels(std::istream& in) {
  std::string magic;
  int version = 0;
  if (!(in >> magic >> version) || magic != "simcf-channels" || version != 1)
    throw std::runtime_error("load_channels: bad header");
  int L = 0, K = 0, N = 0;
  if (!(in >> L >> K >> N) || L < 1 || K < 1 || N < 1)
    throw std::runtime_error("load_channels: bad dimensions");
  ChannelSet set;
  set.beta.resize(L, K);
  set.h.assign(L, std::vector<Eigen::VectorXcd>(K, Eigen::VectorXcd(N)));
  for (int rec = 0; rec < L * K; ++rec) {
    int l = 0, k = 0;
    double beta = 0.0;
    if (!(in >> l >> k >> beta) || l < 0 || l >= L || k < 0 || k >= K)
      throw std::runtime_error("load_channels: bad record index");
    set.beta(l, k) = beta;
    for (int n = 0; n < N; ++n) {
      double re = 0.0, im = 0.0;
      if (!(in >> re >> im))
        throw std::runtime_error("load_channels: truncated record");
      set.h[l][k](n) = {re, im};
    }
  }
  return set;
}

}  // namespace simcf
