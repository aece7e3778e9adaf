#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "simcf/assoc.hpp"
#include "simcf/rate.hpp"
#include "simcf/scenario.hpp"

namespace simcf {

enum class AssocRule { kAga, kNua };
enum class OptimizerKind { kAo, kSimOpt, kPowerOpt, kRpEp };

/// One benchmark variant: an association rule plus an optimizer.
struct SchemeId {
  AssocRule assoc = AssocRule::kAga;
  OptimizerKind opt = OptimizerKind::kAo;

  bool operator==(const SchemeId&) const = default;
};

/// Token forms: aga-ao, nua-ao, aga-sim, nua-sim, aga-power, nua-power,
/// aga-rp-ep, nua-rp-ep.
SchemeId parse_scheme(const std::string& token);
std::string scheme_token(const SchemeId& scheme);
std::vector<SchemeId> all_schemes();

/// Outcome of one (scenario, trial, scheme) execution.
struct RunReport {
  SchemeId scheme;
  RateReport rates;
  std::vector<double> ao_trace;  // objective at init + after each outer step
  int outer_iters = 0;           // scheme's top-level loop iterations
  long power_iters = 0;          // total power-stage ascent steps
  long pga_iters = 0;            // total accepted phase-ascent steps
  double assoc_cost_m = 0.0;     // total served-link distance
  double wall_time_s = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t trial = 0;
};

/// Run one scheme on one trial.  Stages: drop geometry, draw channels,
/// associate antennas (scheme axis 1), then optimize per scheme axis 2:
///  - rp-ep: evaluate at a random phase draw and equal power;
///  - power: power control only, at the same random phase draw;
///  - sim:   phase ascent only, at equal power, from the same draw;
///  - ao:    alternate power control and phase ascent until the relative
///           objective gain drops below ao_rel_tol or ao_max outer rounds.
/// All four optimizers share the per-trial phase draw, so comparisons
/// isolate the optimizer; the ao/sim phase stage uses the configured
/// multistart count on its first round and warm starts afterwards.
RunReport run_scheme(const ScenarioConfig& cfg, std::uint64_t trial,
                     SchemeId scheme);

struct SchemeStats {
  SchemeId scheme;
  double sum_rate_mean = 0.0;
  double sum_rate_std = 0.0;  // sample std over trials (0 when trials == 1)
  std::vector<RunReport> runs;  // trial index ascending
};

/// Run trials 0..trials-1 for every scheme.  Work items execute on up to
/// max_threads threads (0 = hardware concurrency, capped by the item
/// count); results are reduced in trial order, so output is independent of
/// scheduling.
std::vector<SchemeStats> monte_carlo(const ScenarioConfig& cfg,
                                     const std::vector<SchemeId>& schemes,
                                     int trials, int max_threads = 0);

}  // namespace simcf
