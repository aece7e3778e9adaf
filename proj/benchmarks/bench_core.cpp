// Microbenchmarks for the evaluation hot paths: layer-cascade assembly,
// sum-rate evaluation, the analytic phase gradient, and greedy
// association.  Shapes bracket the default desk-scale system.

#include <benchmark/benchmark.h>

#include <cstdint>

#include "simcf/assoc.hpp"
#include "simcf/channel.hpp"
#include "simcf/pga.hpp"
#include "simcf/phase.hpp"
#include "simcf/rate.hpp"
#include "simcf/rng.hpp"
#include "simcf/scenario.hpp"

namespace {

struct Fixture {
  simcf::ScenarioConfig cfg;
  simcf::Layout layout;
  simcf::PropagationSet prop;
  simcf::ChannelSet channels;
  simcf::DistanceTensor dist;
  simcf::AssociationMatrix assoc;
  simcf::PowerAllocation power;
  simcf::PhaseState phases;
  double noise_w = 0.0;
};

Fixture make_fixture(int L, int U, int K, int M, int nx, int ny) {
  Fixture f;
  f.cfg.num_aps = L;
  f.cfg.antennas_per_ap = U;
  f.cfg.num_ues = K;
  f.cfg.num_layers = M;
  f.cfg.atoms_x = nx;
  f.cfg.atoms_y = ny;
  f.cfg.seed = 1;
  f.layout = simcf::build_scenario(f.cfg, 0);
  f.prop = simcf::build_propagation(f.layout, f.cfg);
  const simcf::CorrelationMatrix corr =
      simcf::build_correlation(f.layout, f.cfg);
  simcf::RngStream rng(f.cfg.seed, 0, "channels");
  f.channels = simcf::sample_channels(f.layout, f.cfg, corr, rng);
  f.dist = simcf::distance_tensor(f.layout);
  f.assoc = simcf::aga(f.dist);
  f.power = simcf::equal_power(f.cfg);
  simcf::RngStream phase_rng(f.cfg.seed, 0, "phase-init");
  f.phases = simcf::random_phases(f.cfg, phase_rng);
  f.noise_w = f.cfg.noise_power_w();
  return f;
}

// Cascade assembly: multiply M phase diagonals and M-1 inter-layer
// diffraction matrices for a single access point.
void BM_CascadeBuild(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const int layers = static_cast<int>(state.range(1));
  const Fixture f = make_fixture(1, 2, 2, layers, side, side);
  for (auto _ : state) {
    benchmark::DoNotOptimize(simcf::compute_cascade(f.phases, f.prop, 0));
  }
  state.SetLabel(std::to_string(side * side) + " atoms, " +
                 std::to_string(layers) + " layers");
}

// Full sum-rate evaluation (per-AP chain) at desk scale.
void BM_RateEval(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const Fixture f = make_fixture(6, 2, 4, 2, side, side);
  for (auto _ : state) {
    benchmark::DoNotOptimize(simcf::sum_rate(f.channels, f.phases, f.prop,
                                             f.assoc, f.power, f.noise_w));
  }
  state.SetLabel(std::to_string(side * side) + " atoms per layer");
}

// Analytic gradient of the sum rate in every phase coordinate.
void BM_GradientEval(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const Fixture f = make_fixture(6, 2, 4, 2, side, side);
  for (auto _ : state) {
    benchmark::DoNotOptimize(simcf::grad_sum_rate(
        f.phases, f.channels, f.prop, f.assoc, f.power, f.noise_w));
  }
  state.SetLabel(std::to_string(side * side) + " atoms per layer");
}

// Greedy antenna-to-user association on a full drop.
void BM_GreedyAssociation(benchmark::State& state) {
  const int L = static_cast<int>(state.range(0));
  const Fixture f = make_fixture(L, 2, 8, 1, 2, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(simcf::aga(f.dist));
  }
  state.SetLabel(std::to_string(L) + " APs, 8 users");
}

}  // namespace

BENCHMARK(BM_CascadeBuild)
    ->Args({5, 2})
    ->Args({7, 2})
    ->Args({10, 2})
    ->Args({7, 4});
BENCHMARK(BM_RateEval)->Arg(5)->Arg(7)->Arg(10);
BENCHMARK(BM_GradientEval)->Arg(5)->Arg(7)->Arg(10);
BENCHMARK(BM_GreedyAssociation)->Arg(6)->Arg(12)->Arg(24);

BENCHMARK_MAIN();
